//! Field serialization: a diff-friendly CSV format for complex fields with
//! the grid parameters in comment headers, plus the JSON report types the
//! command line emits.
//!
//! ```text
//! # space=centre|chord
//! # hbar=<float>
//! # n=<int>
//! # extent=<float>
//! i,j,x1,x2,re,im
//! ```
//!
//! Floats are written with 17 significant digits so output bytes are
//! reproducible across runs.

use std::io::{BufRead, Write};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DualGridPair, Space};
use crate::transforms::ComplexField;

/// Write a complex field in the CSV format above.
pub fn write_field(field: &ComplexField, out: &mut dyn Write) -> Result<()> {
    let grid = field.grid();
    let space = match field.space() {
        Space::Centre => "centre",
        Space::Chord => "chord",
    };
    writeln!(out, "# space={space}")?;
    writeln!(out, "# hbar={:.16e}", grid.hbar())?;
    writeln!(out, "# n={}", grid.n())?;
    writeln!(out, "# extent={:.16e}", grid.extent(field.space()))?;
    writeln!(out, "i,j,x1,x2,re,im")?;
    let n = grid.n();
    for i in 0..n {
        for j in 0..n {
            let pt = field.point(i, j);
            let v = field.values()[(i, j)];
            writeln!(
                out,
                "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}",
                pt.p, pt.q, v.re, v.im
            )?;
        }
    }
    Ok(())
}

/// Read a field written by [`write_field`]. All `n²` samples must be
/// present exactly once; coordinates are recomputed from the header rather
/// than trusted from the rows.
pub fn read_field(input: &mut dyn BufRead) -> Result<ComplexField> {
    let mut space: Option<Space> = None;
    let mut hbar: Option<f64> = None;
    let mut n: Option<usize> = None;
    let mut extent: Option<f64> = None;

    let mut line = String::new();
    let mut header_done = false;
    let mut values: Option<Array2<C64>> = None;
    let mut seen: Vec<bool> = Vec::new();
    let mut count = 0usize;

    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if header_done {
                return Err(Error::Parse("header line after data".into()));
            }
            let (key, value) = rest
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header line `{trimmed}`")))?;
            match key.trim() {
                "space" => {
                    space = Some(match value.trim() {
                        "centre" => Space::Centre,
                        "chord" => Space::Chord,
                        other => {
                            return Err(Error::Parse(format!("unknown space `{other}`")))
                        }
                    })
                }
                "hbar" => {
                    hbar = Some(value.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad hbar `{value}`"))
                    })?)
                }
                "n" => {
                    n = Some(value.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad n `{value}`"))
                    })?)
                }
                "extent" => {
                    extent = Some(value.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad extent `{value}`"))
                    })?)
                }
                other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
            }
            continue;
        }
        if trimmed == "i,j,x1,x2,re,im" {
            header_done = true;
            let (Some(space), Some(hbar), Some(n_val), Some(extent)) =
                (space, hbar, n, extent)
            else {
                return Err(Error::Parse("incomplete header".into()));
            };
            if !(hbar > 0.0 && hbar.is_finite()) {
                return Err(Error::NonPositive { what: "hbar", value: hbar });
            }
            if !(extent > 0.0 && extent.is_finite()) {
                return Err(Error::NonPositive { what: "extent", value: extent });
            }
            if n_val < 8 || n_val % 2 != 0 || n_val > 1 << 14 {
                return Err(Error::BadGridSize { n: n_val });
            }
            let _ = space;
            values = Some(Array2::from_elem((n_val, n_val), C64::new(0.0, 0.0)));
            seen = vec![false; n_val * n_val];
            continue;
        }
        let Some(vals) = values.as_mut() else {
            return Err(Error::Parse(format!("data before header: `{trimmed}`")));
        };
        let nn = vals.nrows();
        let mut fields = trimmed.split(',');
        let mut next = |what: &str| -> Result<&str> {
            fields
                .next()
                .ok_or_else(|| Error::Parse(format!("row missing {what}")))
        };
        let i: usize = next("i")?
            .parse()
            .map_err(|_| Error::Parse("bad row index".into()))?;
        let j: usize = next("j")?
            .parse()
            .map_err(|_| Error::Parse("bad column index".into()))?;
        let _x1 = next("x1")?;
        let _x2 = next("x2")?;
        let re: f64 = next("re")?
            .parse()
            .map_err(|_| Error::Parse("bad re value".into()))?;
        let im: f64 = next("im")?
            .parse()
            .map_err(|_| Error::Parse("bad im value".into()))?;
        if fields.next().is_some() {
            return Err(Error::Parse("too many fields in row".into()));
        }
        if i >= nn || j >= nn {
            return Err(Error::Parse(format!("index ({i},{j}) out of range")));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse("field values must be finite".into()));
        }
        if seen[i * nn + j] {
            return Err(Error::Parse(format!("duplicate sample ({i},{j})")));
        }
        seen[i * nn + j] = true;
        count += 1;
        vals[(i, j)] = C64::new(re, im);
    }

    let vals = values.ok_or_else(|| Error::Parse("missing column header".into()))?;
    let nn = vals.nrows();
    if count != nn * nn {
        return Err(Error::Parse(format!("expected {} samples, got {count}", nn * nn)));
    }
    let space = space.unwrap();
    let hbar = hbar.unwrap();
    let extent = extent.unwrap();
    let grid = match space {
        Space::Centre => DualGridPair::new(nn, extent, hbar)?,
        Space::Chord => {
            let centre_extent = nn as f64 * std::f64::consts::PI * hbar / (2.0 * extent);
            DualGridPair::new(nn, centre_extent, hbar)?
        }
    };
    ComplexField::new(grid, space, vals)
}

/// JSON report emitted by the `correlate` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelateReport {
    pub purity: f64,
    pub fourier_invariance_residual: f64,
    pub route_agreement_max_delta: f64,
}

/// One row of the `validate` subcommand's table.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::make_fock;
    use crate::transforms::chord_of;
    use std::io::BufReader;

    #[test]
    fn field_roundtrip_bitexact() {
        let g = DualGridPair::new(32, 6.0, 0.5).unwrap();
        let psi = make_fock(1, &g).unwrap();
        let chi = chord_of(&psi.into(), &g).unwrap();
        let mut buf = Vec::new();
        write_field(chi.field(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# space=chord\n"));
        let parsed = read_field(&mut BufReader::new(&buf[..])).unwrap();
        assert_eq!(parsed.grid(), chi.field().grid());
        assert_eq!(parsed.space(), Space::Chord);
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(parsed.values()[(i, j)], chi.field().values()[(i, j)]);
            }
        }
        // writing again produces identical bytes
        let mut buf2 = Vec::new();
        write_field(&parsed, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn malformed_fields_rejected() {
        for bad in [
            "",
            "i,j,x1,x2,re,im\n0,0,0,0,1,0\n",
            "# space=chord\n# hbar=1\n# n=8\ni,j,x1,x2,re,im\n",
            "# space=weird\n# hbar=1\n# n=8\n# extent=1\ni,j,x1,x2,re,im\n",
            "# space=chord\n# hbar=1\n# n=7\n# extent=1\ni,j,x1,x2,re,im\n",
            "# space=chord\n# hbar=-1\n# n=8\n# extent=1\ni,j,x1,x2,re,im\n",
        ] {
            assert!(
                read_field(&mut BufReader::new(bad.as_bytes())).is_err(),
                "`{bad}` should fail"
            );
        }
    }

    #[test]
    fn incomplete_grid_rejected() {
        let mut text = String::from("# space=chord\n# hbar=1\n# n=8\n# extent=1\ni,j,x1,x2,re,im\n");
        text.push_str("0,0,0,0,1,0\n");
        assert!(read_field(&mut BufReader::new(text.as_bytes())).is_err());
    }

    #[test]
    fn duplicate_sample_rejected() {
        let mut text = String::from("# space=chord\n# hbar=1\n# n=8\n# extent=1\ni,j,x1,x2,re,im\n");
        for _ in 0..2 {
            text.push_str("1,1,0,0,1,0\n");
        }
        assert!(read_field(&mut BufReader::new(text.as_bytes())).is_err());
    }
}
