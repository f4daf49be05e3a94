//! Mini-language parsers for states and curves, shared by the command-line
//! front end and usable on untrusted input.
//!
//! State recipes:
//! `coherent:p=<f>,q=<f>[,omega=<f>]` | `fock:n=<int>` |
//! `cat:p=<f>,q=<f>,sign=+|-` | `superpose:<path.json>`
//!
//! Curve recipes:
//! `circle:I=<f>` | `ellipse:a=<f>,b=<f>[,I=<f>]` | `quartic:E=<f>` |
//! `curve:<path.json>`

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{DualGridPair, PhaseVector};
use crate::semiclassical::{CircleCurve, EllipseCurve, SplineCurve, TorusCurve};
use crate::states::{make_cat, make_coherent, make_fock, superpose_coherent, StateRep};

/// Parsed state description, not yet bound to a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum StateRecipe {
    Coherent { centre: PhaseVector, omega: f64 },
    Fock { n: usize },
    Cat { centre: PhaseVector, sign: i8 },
    /// Terms loaded from a JSON file (or inline source).
    Superpose { terms: Vec<(C64, PhaseVector)> },
}

/// Parsed curve description.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveRecipe {
    Circle { action: f64 },
    Ellipse { a: f64, b: f64, action: f64 },
    /// Quartic-oscillator energy shell `p²/2 + q⁴/4 = E` (for the ergodic
    /// formula).
    Quartic { energy: f64 },
    Spline { theta: Vec<f64>, p: Vec<f64>, q: Vec<f64> },
}

/// One term of a superposition file: coefficient `re + i·im`, centre `(p, q)`.
#[derive(Debug, Deserialize)]
pub struct SuperposeTerm {
    pub re: f64,
    pub im: f64,
    pub p: f64,
    pub q: f64,
}

/// Custom curve file: matching arrays of parameter and coordinates.
#[derive(Debug, Deserialize)]
pub struct CurveFile {
    pub theta: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

fn split_fields(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .filter(|s| !s.is_empty())
        .map(|item| {
            item.split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))
        })
        .collect()
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number for `{key}`: `{value}`")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("`{key}` must be finite, got `{value}`")));
    }
    Ok(v)
}

/// Parse a state recipe. `superpose:` bodies are treated as filesystem
/// paths; use [`parse_state_with_reader`] to intercept the file access.
pub fn parse_state(spec: &str) -> Result<StateRecipe> {
    parse_state_with_reader(spec, &|path| std::fs::read_to_string(path).map_err(Error::Io))
}

/// Parse a state recipe with a custom loader for `superpose:` bodies.
pub fn parse_state_with_reader(
    spec: &str,
    read: &dyn Fn(&str) -> Result<String>,
) -> Result<StateRecipe> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected kind:params, got `{spec}`")))?;
    match kind {
        "coherent" => {
            let mut p = None;
            let mut q = None;
            let mut omega = 1.0;
            for (k, v) in split_fields(body)? {
                match k {
                    "p" => p = Some(parse_f64(k, v)?),
                    "q" => q = Some(parse_f64(k, v)?),
                    "omega" => omega = parse_f64(k, v)?,
                    _ => return Err(Error::Parse(format!("unknown coherent field `{k}`"))),
                }
            }
            let centre = PhaseVector::new(
                p.ok_or_else(|| Error::Parse("coherent needs p=".into()))?,
                q.ok_or_else(|| Error::Parse("coherent needs q=".into()))?,
            );
            if !(omega > 0.0) {
                return Err(Error::Parse(format!("omega must be positive, got {omega}")));
            }
            Ok(StateRecipe::Coherent { centre, omega })
        }
        "fock" => {
            let fields = split_fields(body)?;
            match fields.as_slice() {
                [("n", v)] => {
                    let n: usize = v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad fock level `{v}`")))?;
                    if n > 500 {
                        return Err(Error::Parse(format!("fock level {n} too high (max 500)")));
                    }
                    Ok(StateRecipe::Fock { n })
                }
                _ => Err(Error::Parse("fock needs exactly n=<int>".into())),
            }
        }
        "cat" => {
            let mut p = None;
            let mut q = None;
            let mut sign = None;
            for (k, v) in split_fields(body)? {
                match k {
                    "p" => p = Some(parse_f64(k, v)?),
                    "q" => q = Some(parse_f64(k, v)?),
                    "sign" => {
                        sign = Some(match v.trim() {
                            "+" | "+1" => 1i8,
                            "-" | "-1" => -1i8,
                            other => {
                                return Err(Error::Parse(format!("bad cat sign `{other}`")))
                            }
                        })
                    }
                    _ => return Err(Error::Parse(format!("unknown cat field `{k}`"))),
                }
            }
            Ok(StateRecipe::Cat {
                centre: PhaseVector::new(
                    p.ok_or_else(|| Error::Parse("cat needs p=".into()))?,
                    q.ok_or_else(|| Error::Parse("cat needs q=".into()))?,
                ),
                sign: sign.ok_or_else(|| Error::Parse("cat needs sign=+|-".into()))?,
            })
        }
        "superpose" => {
            let text = read(body)?;
            let terms = parse_superpose_json(&text)?;
            Ok(StateRecipe::Superpose { terms })
        }
        other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
    }
}

/// Parse the JSON body of a superposition file: an array of
/// `{re, im, p, q}` objects.
pub fn parse_superpose_json(text: &str) -> Result<Vec<(C64, PhaseVector)>> {
    let raw: Vec<SuperposeTerm> = serde_json::from_str(text)?;
    if raw.is_empty() {
        return Err(Error::Parse("superposition needs at least one term".into()));
    }
    if raw.len() > 64 {
        return Err(Error::Parse(format!("too many terms ({})", raw.len())));
    }
    raw.iter()
        .map(|t| {
            if ![t.re, t.im, t.p, t.q].iter().all(|v| v.is_finite()) {
                return Err(Error::Parse("superposition terms must be finite".into()));
            }
            Ok((C64::new(t.re, t.im), PhaseVector::new(t.p, t.q)))
        })
        .collect()
}

/// Parse a curve recipe. `curve:` bodies are filesystem paths; use
/// [`parse_curve_with_reader`] to intercept.
pub fn parse_curve(spec: &str) -> Result<CurveRecipe> {
    parse_curve_with_reader(spec, &|path| std::fs::read_to_string(path).map_err(Error::Io))
}

/// Parse a curve recipe with a custom loader for `curve:` bodies.
pub fn parse_curve_with_reader(
    spec: &str,
    read: &dyn Fn(&str) -> Result<String>,
) -> Result<CurveRecipe> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected kind:params, got `{spec}`")))?;
    match kind {
        "circle" => {
            let fields = split_fields(body)?;
            match fields.as_slice() {
                [("I", v)] => {
                    let action = parse_f64("I", v)?;
                    if !(action > 0.0) {
                        return Err(Error::Parse(format!("action must be positive, got {action}")));
                    }
                    Ok(CurveRecipe::Circle { action })
                }
                _ => Err(Error::Parse("circle needs exactly I=<f>".into())),
            }
        }
        "ellipse" => {
            let mut a = None;
            let mut b = None;
            let mut action = 1.0;
            for (k, v) in split_fields(body)? {
                match k {
                    "a" => a = Some(parse_f64(k, v)?),
                    "b" => b = Some(parse_f64(k, v)?),
                    "I" => action = parse_f64(k, v)?,
                    _ => return Err(Error::Parse(format!("unknown ellipse field `{k}`"))),
                }
            }
            let a = a.ok_or_else(|| Error::Parse("ellipse needs a=".into()))?;
            let b = b.ok_or_else(|| Error::Parse("ellipse needs b=".into()))?;
            if !(a > 0.0 && b > 0.0 && action > 0.0) {
                return Err(Error::Parse("ellipse parameters must be positive".into()));
            }
            Ok(CurveRecipe::Ellipse { a, b, action })
        }
        "quartic" => {
            let fields = split_fields(body)?;
            match fields.as_slice() {
                [("E", v)] => {
                    let energy = parse_f64("E", v)?;
                    if !(energy > 0.0) {
                        return Err(Error::Parse(format!("energy must be positive, got {energy}")));
                    }
                    Ok(CurveRecipe::Quartic { energy })
                }
                _ => Err(Error::Parse("quartic needs exactly E=<f>".into())),
            }
        }
        "curve" => {
            let text = read(body)?;
            let file = parse_curve_json(&text)?;
            Ok(CurveRecipe::Spline { theta: file.theta, p: file.p, q: file.q })
        }
        other => Err(Error::Parse(format!("unknown curve kind `{other}`"))),
    }
}

/// Parse and sanity-check the JSON body of a custom curve file.
pub fn parse_curve_json(text: &str) -> Result<CurveFile> {
    let file: CurveFile = serde_json::from_str(text)?;
    let n = file.theta.len();
    if n < 8 || file.p.len() != n || file.q.len() != n {
        return Err(Error::Parse(
            "curve file needs matching theta/p/q arrays with at least 8 samples".into(),
        ));
    }
    if n > 100_000 {
        return Err(Error::Parse(format!("curve file too large ({n} samples)")));
    }
    for v in file.theta.iter().chain(&file.p).chain(&file.q) {
        if !v.is_finite() {
            return Err(Error::Parse("curve samples must be finite".into()));
        }
    }
    Ok(file)
}

impl StateRecipe {
    /// Build the state on a grid.
    pub fn build(&self, grid: &DualGridPair) -> Result<StateRep> {
        Ok(match self {
            StateRecipe::Coherent { centre, omega } => {
                make_coherent(*centre, *omega, grid)?.into()
            }
            StateRecipe::Fock { n } => make_fock(*n, grid)?.into(),
            StateRecipe::Cat { centre, sign } => make_cat(*centre, *sign, grid)?.into(),
            StateRecipe::Superpose { terms } => superpose_coherent(terms, grid)?.into(),
        })
    }
}

impl CurveRecipe {
    /// Build the curve; `Quartic` has no closed parametrization here and is
    /// handled by the ergodic energy-shell machinery instead.
    pub fn build(&self) -> Result<Option<Box<dyn TorusCurve>>> {
        Ok(match self {
            CurveRecipe::Circle { action } => Some(Box::new(CircleCurve::new(*action)?)),
            CurveRecipe::Ellipse { a, b, action } => {
                Some(Box::new(EllipseCurve::new(*a, *b, *action)?))
            }
            CurveRecipe::Quartic { .. } => None,
            CurveRecipe::Spline { theta, p, q } => {
                Some(Box::new(SplineCurve::new(theta, p, q)?))
            }
        })
    }
}
