//! TOML configuration: domain, grid, experiment and output sections. Unknown
//! keys are rejected. Command-line flags override file values.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{ReportFormat, SequenceMode};
use crate::geom::{Aabb, DomainSpec, GraphDomain, GraphFamily, ImplicitShape, Point};
use crate::solver::{GridSpec, Stencil};

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    /// halfplane, halfspace, disc, ball, paraboloid, cosine-bump, c11, ellipse, superellipse.
    pub kind: Option<String>,
    pub dim: Option<usize>,
    pub kappa: Option<f64>,
    pub amplitude: Option<f64>,
    pub frequency: Option<f64>,
    pub half_width: Option<f64>,
    pub radius: Option<f64>,
    pub center: Option<String>,
    pub semi_a: Option<f64>,
    pub semi_b: Option<f64>,
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub spacing: Option<f64>,
    pub margin: Option<f64>,
    pub stencil: Option<u32>,
    pub box_min: Option<String>,
    pub box_max: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// normal, tangential or fixed-ratio.
    pub mode: Option<String>,
    pub levels: Option<usize>,
    pub t0: Option<f64>,
    pub c: Option<Vec<f64>>,
    pub zeta: Option<String>,
    pub lambda: Option<f64>,
    pub spacing_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<String>,
    pub path: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

pub const DEFAULT_C: f64 = 1.2;

fn parse_point(s: &str) -> Result<Point> {
    s.parse::<Point>()
        .map_err(|e| Error::Config(format!("bad point '{s}': {e}")))
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn domain(&self) -> Result<DomainSpec> {
        let d = &self.domain;
        let kind = d.kind.as_deref().unwrap_or("halfplane");
        let kappa = d.kappa.unwrap_or(1.0);
        let hw = d.half_width.unwrap_or(1.0);
        let dim = d.dim.unwrap_or(2);
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!("dimension {dim} is not supported")));
        }
        let planar_graph = |family: GraphFamily| -> Result<DomainSpec> {
            if dim != 2 {
                return Err(Error::Config(format!("{kind} domains are planar only")));
            }
            Ok(DomainSpec::Graph(GraphDomain::planar(family, hw)))
        };
        let spec = match kind {
            "halfplane" | "halfspace" => DomainSpec::HalfSpace {
                dim: if kind == "halfplane" { 2 } else { dim },
            },
            "disc" | "ball" => {
                let center = match &d.center {
                    Some(c) => parse_point(c)?,
                    None => Point::zeros(if kind == "disc" { 2 } else { dim }),
                };
                DomainSpec::Ball {
                    center,
                    radius: d.radius.unwrap_or(1.0),
                }
            }
            "paraboloid" => {
                let fam = GraphFamily::Paraboloid { kappa };
                if dim == 3 {
                    let w = Aabb::new(Point::new3(-hw, -hw, -hw), Point::new3(hw, hw, hw));
                    DomainSpec::Graph(GraphDomain::new(fam, w)?)
                } else {
                    planar_graph(fam)?
                }
            }
            "cosine-bump" => planar_graph(GraphFamily::CosineBump {
                amplitude: d.amplitude.unwrap_or(0.1),
                frequency: d.frequency.unwrap_or(2.0),
            })?,
            "c11" => planar_graph(GraphFamily::C11 { kappa })?,
            "ellipse" => DomainSpec::Implicit(ImplicitShape::Ellipse {
                a: d.semi_a.unwrap_or(2.0),
                b: d.semi_b.unwrap_or(1.0),
            }),
            "superellipse" => DomainSpec::Implicit(ImplicitShape::Superellipse {
                a: d.semi_a.unwrap_or(1.0),
                b: d.semi_b.unwrap_or(1.0),
                p: d.exponent.unwrap_or(4.0),
            }),
            other => return Err(Error::Config(format!("unknown domain kind '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let g = &self.grid;
        let stencil = match g.stencil {
            Some(n) => Some(n.to_string().parse::<Stencil>()?),
            None => None,
        };
        let bbox = match (&g.box_min, &g.box_max) {
            (Some(lo), Some(hi)) => Some(Aabb::new(parse_point(lo)?, parse_point(hi)?)),
            (None, None) => None,
            _ => return Err(Error::Config("box_min and box_max go together".into())),
        };
        let d = GridSpec::default();
        Ok(GridSpec {
            bbox,
            spacing: g.spacing.unwrap_or(d.spacing),
            stencil,
            margin: g.margin.unwrap_or(d.margin),
        })
    }

    pub fn mode(&self) -> Result<SequenceMode> {
        let e = &self.experiment;
        SequenceMode::parse(
            e.mode.as_deref().unwrap_or("tangential"),
            e.lambda.unwrap_or(2.0),
        )
    }

    pub fn c_values(&self) -> Vec<f64> {
        self.experiment.c.clone().unwrap_or_else(|| vec![DEFAULT_C])
    }

    /// `experiment.zeta`, or the default boundary point of the domain.
    pub fn zeta(&self, domain: &DomainSpec) -> Result<Point> {
        match &self.experiment.zeta {
            Some(z) => parse_point(z),
            None => Ok(default_zeta(domain)),
        }
    }

    pub fn format(&self) -> Result<ReportFormat> {
        self.output.format.as_deref().unwrap_or("csv").parse()
    }
}

/// A boundary point of every built-in domain: the origin for half-spaces and
/// graphs, the point of largest `x_0` for balls and level-set shapes.
pub fn default_zeta(domain: &DomainSpec) -> Point {
    match domain {
        DomainSpec::HalfSpace { dim } => Point::zeros(*dim),
        DomainSpec::Ball { center, radius } => *center + Point::basis(center.dim(), 0) * *radius,
        DomainSpec::Graph(g) => Point::zeros(g.dim()),
        DomainSpec::Implicit(ImplicitShape::Ellipse { a, .. })
        | DomainSpec::Implicit(ImplicitShape::Superellipse { a, .. }) => Point::new2(*a, 0.0),
    }
}
