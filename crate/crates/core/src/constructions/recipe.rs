//! Replayable construction logs.
//!
//! A recipe pins a base solid and an ordered list of manipulation steps
//! with their tuned parameters and site indices (which refer to the
//! canonical polyhedron at that point of the chain). Replaying performs
//! no search: every step is applied with its frozen parameters and
//! re-verified, so a recipe reproduces a bit-identical vertex list.

use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;
use crate::scalar::{self, Scalar};
use crate::vec3::Vec3;

use super::catalog;
use super::conway::{self, ConwayParams};
use super::manipulate;

pub const RECIPE_FORMAT: &str = "v1";

#[derive(Clone, Debug, PartialEq)]
pub enum BaseSolid {
    Pyramid { s: u32, h: Scalar },
    Catalog { s: u32, u: u32 },
    Conway { m: u32, r0: Scalar, a: Scalar, b: Scalar, twist: Scalar },
    MonoPyramid { m: u32, r0: Scalar, apex: Vec3 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    TruncateVertex,
    ErectTetrahedron,
    FaceTruncate,
    FaceTruncateOneSided,
    VertexBuild,
    VertexBuildOneSided,
    DisplaceVertex,
}

impl StepKind {
    pub fn name(&self) -> &'static str {
        match self {
            StepKind::TruncateVertex => "truncate_vertex",
            StepKind::ErectTetrahedron => "erect_tetrahedron",
            StepKind::FaceTruncate => "face_truncate",
            StepKind::FaceTruncateOneSided => "face_truncate_one_sided",
            StepKind::VertexBuild => "vertex_build",
            StepKind::VertexBuildOneSided => "vertex_build_one_sided",
            StepKind::DisplaceVertex => "displace_vertex",
        }
    }

    fn from_name(name: &str) -> Option<StepKind> {
        Some(match name {
            "truncate_vertex" => StepKind::TruncateVertex,
            "erect_tetrahedron" => StepKind::ErectTetrahedron,
            "face_truncate" => StepKind::FaceTruncate,
            "face_truncate_one_sided" => StepKind::FaceTruncateOneSided,
            "vertex_build" => StepKind::VertexBuild,
            "vertex_build_one_sided" => StepKind::VertexBuildOneSided,
            "displace_vertex" => StepKind::DisplaceVertex,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub kind: StepKind,
    pub site: Vec<usize>,
    pub params: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recipe {
    pub target: (u32, u32),
    pub base: BaseSolid,
    pub steps: Vec<Step>,
}

impl Recipe {
    pub fn new(target: (u32, u32), base: BaseSolid) -> Self {
        Recipe {
            target,
            base,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: StepKind, site: Vec<usize>, params: Vec<Scalar>) {
        self.steps.push(Step { kind, site, params });
    }

    /// Rebuilds the polyhedron from the frozen base and steps.
    pub fn replay(&self) -> Result<Polyhedron> {
        let mut poly = match &self.base {
            BaseSolid::Pyramid { s, h } => catalog::pyramid_fixed(*s, h)?,
            BaseSolid::Catalog { s, u } => catalog::catalog(*s, *u)?,
            BaseSolid::Conway { m, r0, a, b, twist } => {
                let params = ConwayParams {
                    m: *m,
                    r0: r0.clone(),
                    a: a.clone(),
                    b: b.clone(),
                    cap_twist: twist.clone(),
                    apex: None,
                };
                conway::conway_solid(&params)?.polyhedron
            }
            BaseSolid::MonoPyramid { m, r0, apex } => {
                let params = ConwayParams {
                    m: *m,
                    r0: r0.clone(),
                    apex: Some(apex.clone()),
                    ..ConwayParams::default()
                };
                let symmetric = apex.x == Scalar::from_integer(0.into());
                conway::mono_unstable_pyramid(&params, symmetric)?.0
            }
        };
        for (i, step) in self.steps.iter().enumerate() {
            poly = apply_step(&poly, step)
                .map_err(|e| Error::ConditionViolated(format!("replay step {i}: {e}")))?;
        }
        Ok(poly)
    }
}

fn apply_step(p: &Polyhedron, step: &Step) -> Result<Polyhedron> {
    match step.kind {
        StepKind::TruncateVertex => {
            manipulate::apply_truncate_vertex(p, step.site[0], &step.params[0])
        }
        StepKind::ErectTetrahedron => {
            manipulate::apply_erect_tetrahedron(p, step.site[0], &step.params[0], &step.params[1])
        }
        StepKind::FaceTruncate | StepKind::FaceTruncateOneSided => {
            let one_sided = step.kind == StepKind::FaceTruncateOneSided;
            manipulate::apply_face_truncate(
                p,
                step.site[0],
                &step.site[1..],
                one_sided,
                &step.params[0],
                &step.params[1],
                &step.params[2],
            )
        }
        StepKind::VertexBuild | StepKind::VertexBuildOneSided => {
            let one_sided = step.kind == StepKind::VertexBuildOneSided;
            manipulate::apply_vertex_build(
                p,
                step.site[0],
                step.site[1],
                (step.site[2], step.site[3]),
                one_sided,
                &step.params[0],
                &step.params[1],
                &step.params[2],
            )
        }
        StepKind::DisplaceVertex => {
            let offset = Vec3::new(
                step.params[0].clone(),
                step.params[1].clone(),
                step.params[2].clone(),
            );
            manipulate::displace_vertex(p, step.site[0], &offset)
        }
    }
}

impl Recipe {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("RECIPE {RECIPE_FORMAT}\n"));
        out.push_str(&format!("TARGET {},{}\n", self.target.0, self.target.1));
        match &self.base {
            BaseSolid::Pyramid { s, h } => {
                out.push_str(&format!("BASE pyramid {} {}\n", s, scalar::format(h)));
            }
            BaseSolid::Catalog { s, u } => {
                out.push_str(&format!("BASE catalog {s} {u}\n"));
            }
            BaseSolid::Conway { m, r0, a, b, twist } => {
                out.push_str(&format!(
                    "BASE conway {} {} {} {} {}\n",
                    m,
                    scalar::format(r0),
                    scalar::format(a),
                    scalar::format(b),
                    scalar::format(twist)
                ));
            }
            BaseSolid::MonoPyramid { m, r0, apex } => {
                out.push_str(&format!(
                    "BASE mono_pyramid {} {} {} {} {}\n",
                    m,
                    scalar::format(r0),
                    scalar::format(&apex.x),
                    scalar::format(&apex.y),
                    scalar::format(&apex.z)
                ));
            }
        }
        for step in &self.steps {
            let site = step
                .site
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let params = step
                .params
                .iter()
                .map(scalar::format)
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "STEP {} site={} params={}\n",
                step.kind.name(),
                site,
                params
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Recipe> {
        let err = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let mut target = None;
        let mut base = None;
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut words = trimmed.split_whitespace();
            match words.next() {
                Some("RECIPE") => {
                    let v = words.next().ok_or_else(|| err(line, "missing version"))?;
                    if v != RECIPE_FORMAT {
                        return Err(err(line, &format!("unsupported recipe version {v}")));
                    }
                }
                Some("TARGET") => {
                    let spec = words.next().ok_or_else(|| err(line, "missing target"))?;
                    let (s, u) = spec
                        .split_once(',')
                        .ok_or_else(|| err(line, "target must be S,U"))?;
                    target = Some((
                        s.parse().map_err(|_| err(line, "bad S"))?,
                        u.parse().map_err(|_| err(line, "bad U"))?,
                    ));
                }
                Some("BASE") => {
                    let kind = words.next().ok_or_else(|| err(line, "missing base kind"))?;
                    let rest: Vec<&str> = words.collect();
                    let num = |k: usize| -> Result<Scalar> {
                        scalar::parse(
                            rest.get(k)
                                .ok_or_else(|| err(line, "missing base field"))?,
                        )
                        .map_err(|m| err(line, &m))
                    };
                    let int_field = |k: usize| -> Result<u32> {
                        rest.get(k)
                            .ok_or_else(|| err(line, "missing base field"))?
                            .parse()
                            .map_err(|_| err(line, "bad integer field"))
                    };
                    base = Some(match kind {
                        "pyramid" => BaseSolid::Pyramid {
                            s: int_field(0)?,
                            h: num(1)?,
                        },
                        "catalog" => BaseSolid::Catalog {
                            s: int_field(0)?,
                            u: int_field(1)?,
                        },
                        "conway" => BaseSolid::Conway {
                            m: int_field(0)?,
                            r0: num(1)?,
                            a: num(2)?,
                            b: num(3)?,
                            twist: num(4)?,
                        },
                        "mono_pyramid" => BaseSolid::MonoPyramid {
                            m: int_field(0)?,
                            r0: num(1)?,
                            apex: Vec3::new(num(2)?, num(3)?, num(4)?),
                        },
                        other => return Err(err(line, &format!("unknown base {other}"))),
                    });
                }
                Some("STEP") => {
                    let name = words.next().ok_or_else(|| err(line, "missing step name"))?;
                    let kind = StepKind::from_name(name)
                        .ok_or_else(|| err(line, &format!("unknown step {name}")))?;
                    let mut site = Vec::new();
                    let mut params = Vec::new();
                    for field in words {
                        if let Some(rest) = field.strip_prefix("site=") {
                            for tok in rest.split(',').filter(|t| !t.is_empty()) {
                                site.push(tok.parse().map_err(|_| err(line, "bad site index"))?);
                            }
                        } else if let Some(rest) = field.strip_prefix("params=") {
                            for tok in rest.split(',').filter(|t| !t.is_empty()) {
                                params.push(scalar::parse(tok).map_err(|m| err(line, &m))?);
                            }
                        } else {
                            return Err(err(line, &format!("unknown field {field}")));
                        }
                    }
                    steps.push(Step { kind, site, params });
                }
                Some(other) => return Err(err(line, &format!("unknown directive {other}"))),
                None => {}
            }
        }
        Ok(Recipe {
            target: target.ok_or_else(|| err(0, "missing TARGET"))?,
            base: base.ok_or_else(|| err(0, "missing BASE"))?,
            steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn text_roundtrip() {
        let mut r = Recipe::new(
            (5, 6),
            BaseSolid::Pyramid {
                s: 4,
                h: int(1),
            },
        );
        r.push(StepKind::TruncateVertex, vec![2], vec![ratio(1, 32)]);
        let text = r.to_text();
        let back = Recipe::parse(&text).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Recipe::parse("RECIPE v1\nGARBAGE\n").is_err());
        assert!(Recipe::parse("RECIPE v9\n").is_err());
    }
}
