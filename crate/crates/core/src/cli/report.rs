//! The serializable report emitted by every subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cones::ChamberDecomposition;
use crate::detvar::{segre_secant_invariants, veronese_secant_invariants, VerificationReport};
use crate::lattice::{render_rational, to_rationals, RationalVector};
use crate::spaces::{orbit_picard_group, positivity_of, SpaceError, SpaceKind, SpaceModel};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub space: Option<SpaceSection>,
    pub invariants: Option<Invariants>,
    pub cones: Option<Cones>,
    pub chambers: Option<Chambers>,
    pub positivity: Option<PositivitySection>,
    pub automorphisms: Option<String>,
    pub verifications: Vec<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSection {
    pub kind: SpaceKind,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub dimension: i64,
    /// Degree of the underlying secant variety, when there is one.
    pub degree: Option<String>,
    pub ambient_dimension: Option<i64>,
    pub picard_rank: Option<usize>,
    pub orbit_picard_group: Option<String>,
    pub boundary: Vec<String>,
    pub colors: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cones {
    pub basis: Vec<String>,
    /// Coordinates of each named class, empty without coordinates.
    pub classes: BTreeMap<String, Vec<String>>,
    pub eff: Vec<String>,
    pub nef: Vec<String>,
    pub mov: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub label: String,
    pub coordinates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub rays: Vec<String>,
    pub nef: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chambers {
    pub count: usize,
    pub expected: Option<usize>,
    pub rays: Vec<Ray>,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivitySection {
    pub anticanonical: Vec<String>,
    pub classification: String,
}

fn render_vector(v: &RationalVector) -> Vec<String> {
    v.iter().map(render_rational).collect()
}

fn secant_degree(kind: &SpaceKind) -> Option<(String, i64)> {
    let inv = match *kind {
        SpaceKind::Collineations { n, m, h } | SpaceKind::SegreBlowup { n, m, h, .. } => {
            segre_secant_invariants(n, m, h).ok()?
        }
        SpaceKind::Quadrics { n, h } | SpaceKind::VeroneseBlowup { n, h, .. } => {
            veronese_secant_invariants(n, h).ok()?
        }
        _ => return None,
    };
    Some((inv.deg.to_string(), inv.ambient_dim))
}

impl Report {
    /// Invariants, cones, positivity and automorphisms of a model.
    pub fn for_model(model: &SpaceModel) -> Result<Self, SpaceError> {
        let (degree, ambient) = match secant_degree(&model.kind) {
            Some((d, a)) => (Some(d), Some(a)),
            None => (None, None),
        };
        let orbit = match model.kind.canonical() {
            SpaceKind::Collineations { .. } | SpaceKind::Quadrics { .. } => {
                Some(orbit_picard_group(&model.kind)?.to_string())
            }
            _ => None,
        };
        let invariants = Invariants {
            dimension: model.dimension,
            degree,
            ambient_dimension: ambient,
            picard_rank: model.picard_rank,
            orbit_picard_group: orbit,
            boundary: model.boundary.clone(),
            colors: model.colors.clone(),
            notes: model.notes.clone(),
        };
        let cones = Cones {
            basis: model.basis.clone(),
            classes: model
                .classes
                .iter()
                .map(|c| (c.label.clone(), render_vector(&c.coefficients)))
                .collect(),
            eff: model.eff_generators.clone(),
            nef: model.nef_generators.clone(),
            mov: model.mov_generators.clone(),
        };
        let positivity = match &model.anticanonical {
            Some(k) => Some(PositivitySection {
                anticanonical: render_vector(&k.coefficients),
                classification: positivity_of(model)?.to_string(),
            }),
            None => None,
        };
        Ok(Report {
            space: Some(SpaceSection {
                kind: model.kind,
                name: model.kind.to_string(),
            }),
            invariants: Some(invariants),
            cones: Some(cones),
            chambers: None,
            positivity,
            automorphisms: model.aut_group.as_ref().map(ToString::to_string),
            verifications: Vec::new(),
        })
    }

    pub fn with_chambers(
        mut self,
        model: &SpaceModel,
        dec: &ChamberDecomposition,
    ) -> Result<Self, SpaceError> {
        let label = |ray: &[num_bigint::BigInt]| -> String {
            model
                .label_of_ray(ray)
                .map(str::to_string)
                .unwrap_or_else(|| RationalVector(to_rationals(ray)).to_string())
        };
        let rays = dec
            .rays
            .iter()
            .map(|r| Ray {
                label: label(r),
                coordinates: r.iter().map(ToString::to_string).collect(),
            })
            .collect();
        let nef = model.nef_cone()?;
        let cells = dec
            .chambers
            .iter()
            .enumerate()
            .map(|(index, c)| Cell {
                index,
                rays: c.rays().iter().map(|r| label(r)).collect(),
                nef: *c == nef,
            })
            .collect();
        self.chambers = Some(Chambers {
            count: dec.len(),
            expected: model.chamber_count,
            rays,
            cells,
        });
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        // Going through Value sorts every object's keys.
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        if let Some(space) = &self.space {
            let _ = writeln!(s, "# {}\n", space.name);
        }
        if let Some(inv) = &self.invariants {
            let _ = writeln!(s, "| invariant | value |\n|---|---|");
            let _ = writeln!(s, "| dimension | {} |", inv.dimension);
            if let Some(d) = &inv.degree {
                let _ = writeln!(s, "| degree of secant variety | {d} |");
            }
            if let Some(a) = inv.ambient_dimension {
                let _ = writeln!(s, "| ambient dimension | {a} |");
            }
            let rank = inv
                .picard_rank
                .map_or("unknown".to_string(), |r| r.to_string());
            let _ = writeln!(s, "| Picard rank | {rank} |");
            if let Some(g) = &inv.orbit_picard_group {
                let _ = writeln!(s, "| Pic of open orbit | {g} |");
            }
            let _ = writeln!(s, "| boundary | {} |", inv.boundary.join(", "));
            let _ = writeln!(s, "| colors | {} |", inv.colors.join(", "));
            if let Some(g) = &self.automorphisms {
                let _ = writeln!(s, "| automorphisms | {g} |");
            }
            for note in &inv.notes {
                let _ = writeln!(s, "\n_{note}_");
            }
            s.push('\n');
        }
        if let Some(c) = &self.cones {
            let _ = writeln!(s, "## Cones\n");
            let _ = writeln!(s, "- Eff = <{}>", c.eff.join(", "));
            let _ = writeln!(s, "- Nef = <{}>", c.nef.join(", "));
            if let Some(m) = &c.mov {
                let _ = writeln!(s, "- Mov = <{}>", m.join(", "));
            }
            if !c.basis.is_empty() {
                let _ = writeln!(s, "\n| class | ({}) |\n|---|---|", c.basis.join(", "));
                for (l, v) in &c.classes {
                    let _ = writeln!(s, "| {l} | ({}) |", v.join(", "));
                }
            }
            s.push('\n');
        }
        if let Some(ch) = &self.chambers {
            let _ = writeln!(s, "## Chambers ({})\n", ch.count);
            for cell in &ch.cells {
                let tag = if cell.nef { " (nef)" } else { "" };
                let _ = writeln!(s, "{}. <{}>{tag}", cell.index + 1, cell.rays.join(", "));
            }
            s.push('\n');
        }
        if let Some(p) = &self.positivity {
            let _ = writeln!(
                s,
                "## Positivity\n\n-K = ({}): {}\n",
                p.anticanonical.join(", "),
                p.classification
            );
        }
        for v in &self.verifications {
            let verdict = if v.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "## verify {}: {verdict}\n", v.name);
            for (k, x) in &v.parameters {
                let _ = writeln!(s, "- {k} = {x}");
            }
            for (k, x) in &v.counts {
                let _ = writeln!(s, "- {k}: {x}");
            }
            for (k, x) in &v.details {
                let _ = writeln!(s, "- {k}: {x}");
            }
            if let Some(w) = &v.counterexample {
                let _ = writeln!(s, "- counterexample: {w:?}");
            }
            s.push('\n');
        }
        s
    }
}
