//! `key = value` configuration with `[section]` headers.
//!
//! ```text
//! [experiment]
//! kind = asymptotic-study
//!
//! [shape]
//! name = circle
//! radius = 1.0
//!
//! [coupling]
//! alpha = 20, 40, 80, 160
//!
//! [discretization]
//! j_max = 3
//! ```
//!
//! `#` starts a comment. Keys are unique within a section.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    BoundStates,
    Comparison,
    AsymptoticStudy,
    Counting,
    TransverseCheck,
    Bands,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::BoundStates,
        ExperimentKind::Comparison,
        ExperimentKind::AsymptoticStudy,
        ExperimentKind::Counting,
        ExperimentKind::TransverseCheck,
        ExperimentKind::Bands,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::BoundStates => "bound-states",
            ExperimentKind::Comparison => "comparison",
            ExperimentKind::AsymptoticStudy => "asymptotic-study",
            ExperimentKind::Counting => "counting",
            ExperimentKind::TransverseCheck => "transverse-check",
            ExperimentKind::Bands => "bands",
        }
    }

    fn needs_alpha(self) -> bool {
        self != ExperimentKind::Comparison
    }

    fn needs_shape(self) -> bool {
        self != ExperimentKind::TransverseCheck
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown experiment '{s}'; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeParams {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    PerturbedCircle { radius: f64, cos: Vec<f64>, sin: Vec<f64> },
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
    PerturbedSphere { radius: f64, coeffs: Vec<f64> },
}

pub const SHAPE_NAMES: [&str; 6] = [
    "circle",
    "ellipse",
    "perturbed-circle",
    "sphere",
    "torus",
    "perturbed-sphere",
];

impl ShapeParams {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeParams::Circle { .. } => "circle",
            ShapeParams::Ellipse { .. } => "ellipse",
            ShapeParams::PerturbedCircle { .. } => "perturbed-circle",
            ShapeParams::Sphere { .. } => "sphere",
            ShapeParams::Torus { .. } => "torus",
            ShapeParams::PerturbedSphere { .. } => "perturbed-sphere",
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(
            self,
            ShapeParams::Circle { .. } | ShapeParams::Ellipse { .. } | ShapeParams::PerturbedCircle { .. }
        )
    }

    pub fn describe(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
        match self {
            ShapeParams::Circle { radius } => format!("circle radius={radius}"),
            ShapeParams::Ellipse { a, b } => format!("ellipse a={a} b={b}"),
            ShapeParams::PerturbedCircle { radius, cos, sin } => {
                format!(
                    "perturbed-circle radius={radius} cos=[{}] sin=[{}]",
                    list(cos),
                    list(sin)
                )
            }
            ShapeParams::Sphere { radius } => format!("sphere radius={radius}"),
            ShapeParams::Torus { major, minor } => format!("torus major={major} minor={minor}"),
            ShapeParams::PerturbedSphere { radius, coeffs } => {
                format!("perturbed-sphere radius={radius} coeffs=[{}]", list(coeffs))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Mode matching where the shape separates, Nyström otherwise.
    #[default]
    Auto,
    Modes,
    Nystrom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discretization {
    /// Curve nodes; chosen from κ ≈ α/2 when absent.
    pub nodes: Option<usize>,
    /// Surface grid `(polar, azimuthal)`.
    pub grid: (usize, usize),
    pub j_max: usize,
    pub theta_samples: usize,
    pub method: Method,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization {
            nodes: None,
            grid: (24, 48),
            j_max: 5,
            theta_samples: 33,
            method: Method::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub shape: Option<ShapeParams>,
    pub alphas: Vec<f64>,
    pub discretization: Discretization,
    /// Chain period for `bands`.
    pub period: Option<f64>,
    /// Robin coefficient for `transverse-check`.
    pub c_a: f64,
    pub out: Option<PathBuf>,
    /// Raw text, hashed into the run manifest.
    pub source: String,
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    used: bool,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn err(line: usize, field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        line: Some(line),
        field: Some(field.to_string()),
        message: message.into(),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>, CliError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .ok_or_else(|| CliError::Config {
                    line: Some(line),
                    field: None,
                    message: format!("malformed section header '{content}'"),
                })?;
            if sections.iter().any(|s| s.name == name) {
                return Err(err(line, name, "duplicate section"));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
            line: Some(line),
            field: None,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::Config {
                line: Some(line),
                field: None,
                message: "empty key".into(),
            });
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| err(line, key, "key outside of any section"))?;
        if section.entries.iter().any(|e| e.key == key) {
            return Err(err(line, key, format!("duplicate key in [{}]", section.name)));
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
            used: false,
        });
    }
    Ok(sections)
}

struct Reader {
    sections: Vec<Section>,
}

impl Reader {
    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let s = self.sections.iter_mut().find(|s| s.name == section)?;
        let e = s.entries.iter_mut().find(|e| e.key == key)?;
        e.used = true;
        Some((e.value.clone(), e.line))
    }

    fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|s| s.name == name)
    }

    fn parse<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<(T, usize)>, CliError> {
        match self.take(section, key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<T>()
                .map(|x| Some((x, line)))
                .map_err(|_| err(line, key, format!("cannot parse '{v}'"))),
        }
    }

    fn positive(&mut self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.parse::<f64>(section, key)? {
            None => Ok(None),
            Some((x, line)) if !(x.is_finite() && x > 0.0) => Err(err(line, key, format!("must be positive, got {x}"))),
            Some((x, _)) => Ok(Some(x)),
        }
    }

    fn required(&mut self, section: &str, key: &str, shape: &str) -> Result<f64, CliError> {
        let line = self.sections.iter().find(|s| s.name == section).map(|s| s.line);
        self.positive(section, key)?.ok_or_else(|| CliError::Config {
            line,
            field: Some(key.to_string()),
            message: format!("{shape} needs '{key}' in [{section}]"),
        })
    }

    fn count(&mut self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        match self.parse::<usize>(section, key)? {
            Some((0, line)) => Err(err(line, key, "must be positive")),
            other => Ok(other.map(|(x, _)| x)),
        }
    }

    fn list(&mut self, section: &str, key: &str) -> Result<Option<(Vec<f64>, usize)>, CliError> {
        let Some((v, line)) = self.take(section, key) else {
            return Ok(None);
        };
        let items = v
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(line, key, format!("cannot parse '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some((items, line)))
    }

    fn leftovers(&self) -> Result<(), CliError> {
        for s in &self.sections {
            if !KNOWN_SECTIONS.contains(&s.name.as_str()) {
                return Err(err(
                    s.line,
                    &s.name,
                    format!("unknown section; expected one of {}", KNOWN_SECTIONS.join(", ")),
                ));
            }
            if let Some(e) = s.entries.iter().find(|e| !e.used) {
                return Err(err(e.line, &e.key, format!("unknown or unused key in [{}]", s.name)));
            }
        }
        Ok(())
    }
}

const KNOWN_SECTIONS: [&str; 7] = [
    "experiment",
    "shape",
    "coupling",
    "discretization",
    "chain",
    "transverse",
    "output",
];

fn parse_shape(r: &mut Reader) -> Result<Option<ShapeParams>, CliError> {
    let Some((name, line)) = r.take("shape", "name") else {
        return Ok(None);
    };
    let list = |r: &mut Reader, key: &str| -> Result<Vec<f64>, CliError> {
        Ok(r.list("shape", key)?.map(|x| x.0).unwrap_or_default())
    };
    let shape = match name.as_str() {
        "circle" => ShapeParams::Circle {
            radius: r.required("shape", "radius", "circle")?,
        },
        "ellipse" => ShapeParams::Ellipse {
            a: r.required("shape", "a", "ellipse")?,
            b: r.required("shape", "b", "ellipse")?,
        },
        "perturbed-circle" => ShapeParams::PerturbedCircle {
            radius: r.required("shape", "radius", "perturbed-circle")?,
            cos: list(r, "cos")?,
            sin: list(r, "sin")?,
        },
        "sphere" => ShapeParams::Sphere {
            radius: r.required("shape", "radius", "sphere")?,
        },
        "torus" => {
            let major = r.required("shape", "major", "torus")?;
            let minor = r.required("shape", "minor", "torus")?;
            if minor >= major {
                return Err(err(line, "minor", "torus needs minor < major"));
            }
            ShapeParams::Torus { major, minor }
        }
        "perturbed-sphere" => ShapeParams::PerturbedSphere {
            radius: r.required("shape", "radius", "perturbed-sphere")?,
            coeffs: list(r, "coeffs")?,
        },
        other => {
            return Err(err(
                line,
                "name",
                format!("unknown shape '{other}'; supported shapes: {}", SHAPE_NAMES.join(", ")),
            ));
        }
    };
    Ok(Some(shape))
}

impl ExperimentConfig {
    /// Parses `text` for a run of `kind`. A `kind` given in `[experiment]`
    /// must agree with it.
    pub fn parse(text: &str, kind: ExperimentKind) -> Result<Self, CliError> {
        let mut r = Reader {
            sections: split_sections(text)?,
        };
        if let Some((k, line)) = r.take("experiment", "kind") {
            let declared: ExperimentKind = k.parse().map_err(|m: String| err(line, "kind", m))?;
            if declared != kind {
                return Err(err(
                    line,
                    "kind",
                    format!("config is for '{declared}' but '{kind}' was requested"),
                ));
            }
        }
        let shape = parse_shape(&mut r)?;
        if kind.needs_shape() && shape.is_none() {
            return Err(CliError::Config {
                line: None,
                field: Some("name".into()),
                message: format!("'{kind}' needs [shape] name = one of {}", SHAPE_NAMES.join(", ")),
            });
        }

        let alphas = match r.list("coupling", "alpha")? {
            Some((a, line)) => {
                if a.is_empty() {
                    return Err(err(line, "alpha", "empty ladder"));
                }
                if let Some(x) = a.iter().find(|x| !(**x > 0.0)) {
                    return Err(err(line, "alpha", format!("couplings must be positive, got {x}")));
                }
                if a.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(err(line, "alpha", "ladder must be strictly increasing"));
                }
                a
            }
            None if kind.needs_alpha() => {
                return Err(CliError::Config {
                    line: None,
                    field: Some("alpha".into()),
                    message: format!("'{kind}' needs [coupling] alpha = a1, a2, ..."),
                });
            }
            None => Vec::new(),
        };

        let mut d = Discretization::default();
        if kind == ExperimentKind::Bands {
            d.j_max = 2;
        }
        d.nodes = r.count("discretization", "nodes")?;
        if let Some(nodes) = d.nodes {
            if nodes < 16 || nodes % 2 == 1 {
                let line = r
                    .sections
                    .iter()
                    .find(|s| s.name == "discretization")
                    .map(|s| s.line)
                    .unwrap_or(0);
                return Err(err(line, "nodes", format!("need an even node count ≥ 16, got {nodes}")));
            }
        }
        let nu = r.count("discretization", "polar")?;
        let nv = r.count("discretization", "azimuthal")?;
        d.grid = (nu.unwrap_or(d.grid.0), nv.unwrap_or(d.grid.1));
        d.j_max = r.count("discretization", "j_max")?.unwrap_or(d.j_max);
        d.theta_samples = r.count("discretization", "theta_samples")?.unwrap_or(d.theta_samples);
        if let Some((m, line)) = r.take("discretization", "method") {
            d.method = match m.as_str() {
                "auto" => Method::Auto,
                "modes" => Method::Modes,
                "nystrom" => Method::Nystrom,
                other => {
                    return Err(err(
                        line,
                        "method",
                        format!("unknown method '{other}'; expected auto, modes or nystrom"),
                    ))
                }
            };
        }

        let period = r.positive("chain", "period")?;
        if kind == ExperimentKind::Bands && period.is_none() {
            return Err(CliError::Config {
                line: None,
                field: Some("period".into()),
                message: "'bands' needs [chain] period".into(),
            });
        }
        let c_a = match r.parse::<f64>("transverse", "c_a")? {
            Some((x, line)) if !(x.is_finite() && x >= 0.0) => {
                return Err(err(line, "c_a", format!("must be non-negative, got {x}")))
            }
            Some((x, _)) => x,
            None => 0.0,
        };
        let out = r.take("output", "dir").map(|(p, _)| PathBuf::from(p));
        if !r.has_section("experiment") && !r.has_section("shape") && !r.has_section("coupling") {
            return Err(CliError::Config {
                line: None,
                field: None,
                message: "config has no recognised sections".into(),
            });
        }
        r.leftovers()?;
        Ok(ExperimentConfig {
            kind,
            shape,
            alphas,
            discretization: d,
            period,
            c_a,
            out,
            source: text.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STUDY: &str = "[experiment]\nkind = asymptotic-study\n\n[shape]\nname = circle\nradius = 1.0  # unit\n\n[coupling]\nalpha = 20, 40, 80, 160\n";

    #[test]
    fn parses_sections_and_lists() {
        let c = ExperimentConfig::parse(STUDY, ExperimentKind::AsymptoticStudy).unwrap();
        assert_eq!(c.shape, Some(ShapeParams::Circle { radius: 1.0 }));
        assert_eq!(c.alphas, vec![20.0, 40.0, 80.0, 160.0]);
        assert_eq!(c.discretization.j_max, 5);
    }

    #[test]
    fn reports_line_and_field() {
        let bad = STUDY.replace("radius = 1.0", "radius = -1");
        match ExperimentConfig::parse(&bad, ExperimentKind::AsymptoticStudy) {
            Err(CliError::Config {
                line: Some(6),
                field: Some(f),
                ..
            }) => assert_eq!(f, "radius"),
            other => panic!("{other:?}"),
        }
        let bad = STUDY.replace("20, 40,", "40, 20,");
        assert!(matches!(
            ExperimentConfig::parse(&bad, ExperimentKind::AsymptoticStudy),
            Err(CliError::Config { line: Some(9), .. })
        ));
    }

    #[test]
    fn unknown_shape_names_the_supported_ones() {
        let bad = STUDY.replace("name = circle", "name = hexagon");
        let e = ExperimentConfig::parse(&bad, ExperimentKind::AsymptoticStudy)
            .unwrap_err()
            .to_string();
        for s in SHAPE_NAMES {
            assert!(e.contains(s), "{e}");
        }
    }

    #[test]
    fn rejects_mismatched_kind_and_stray_keys() {
        assert!(ExperimentConfig::parse(STUDY, ExperimentKind::Counting).is_err());
        let stray = format!("{STUDY}[output]\ndirectory = x\n");
        assert!(ExperimentConfig::parse(&stray, ExperimentKind::AsymptoticStudy).is_err());
        assert!(ExperimentConfig::parse("alpha = 3\n", ExperimentKind::Counting).is_err());
    }
}
