//! Bundled catalog of potentials and the ODEs they satisfy.

mod template;
mod verify;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::compat::{match_ode, nlcc, ordered_params, MatchReport, Profile};
use crate::deteq::IntegralAnsatz;
use crate::error::{Error, Result};
use crate::painleve::OdeSpec;
use crate::symcore::{parse_expr, DPoly, Symbol};

pub use template::{template_match, TemplateFamily, TemplateMatch, TemplateSpec};
pub use verify::{verify_potential, LevelCheck, LevelStatus, VerifyReport};

const FILES: &[(&str, &str)] = &[
    ("N3-I.ode", include_str!("../../data/catalog/N3-I.ode")),
    ("N5-II.ode", include_str!("../../data/catalog/N5-II.ode")),
    ("N5-I.ode", include_str!("../../data/catalog/N5-I.ode")),
    ("N6-II.ode", include_str!("../../data/catalog/N6-II.ode")),
    ("N7-II.ode", include_str!("../../data/catalog/N7-II.ode")),
    ("N7-I.ode", include_str!("../../data/catalog/N7-I.ode")),
    ("N8-II.ode", include_str!("../../data/catalog/N8-II.ode")),
    ("N9-II.ode", include_str!("../../data/catalog/N9-II.ode")),
    ("N9-I.ode", include_str!("../../data/catalog/N9-I.ode")),
    ("N10-II.ode", include_str!("../../data/catalog/N10-II.ode")),
];

const INDEX: &str = include_str!("../../data/catalog/index.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    I,
    II,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II => "II",
        }
    }
}

/// How the catalog function enters the potential:
/// `V1(x) = scale * D^(shift)(omega*x)` with `x_subs` applied to the
/// catalog parameters. The `y` side uses `y_subs`; catalog parameters not
/// mentioned there get independent copies with a `_y` suffix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub scale: String,
    pub shift: i32,
    pub omega: String,
    #[serde(default)]
    pub x_subs: BTreeMap<String, String>,
    #[serde(default)]
    pub y_subs: BTreeMap<String, String>,
    /// A specific choice of seed constants to compare with what the
    /// compatibility conditions require.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub literal: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct IndexEntry {
    id: String,
    #[serde(rename = "N")]
    n: usize,
    family: Family,
    file: String,
    expected_resonances: Vec<i64>,
    resonance_source: String,
    #[serde(default)]
    assumptions: Vec<String>,
    potential: String,
    y_part: String,
    #[serde(default)]
    notes: String,
    #[serde(default)]
    erratum: Option<String>,
    embedding: Embedding,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub family: Family,
    pub file: String,
    pub ode: OdeSpec,
    pub expected_resonances: Vec<i64>,
    /// `printed` when the resonances are listed with the equation,
    /// `derived` when they were computed here.
    pub resonance_source: String,
    pub assumptions: Vec<String>,
    pub potential: String,
    pub y_part: String,
    pub notes: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erratum: Option<String>,
    pub embedding: Embedding,
    #[serde(skip)]
    pub source: &'static str,
}

impl CatalogEntry {
    /// Leading part of the integral the potential was derived from.
    pub fn seed(&self) -> IntegralAnsatz {
        match self.family {
            Family::I => IntegralAnsatz::family_one(self.n),
            Family::II => IntegralAnsatz::family_two(self.n),
        }
    }

    pub fn template(&self) -> TemplateSpec {
        let family = match self.family {
            Family::I => TemplateFamily::I,
            Family::II => TemplateFamily::II,
        };
        TemplateSpec { family, n: self.n }
    }

    /// Nonzero assumptions as symbol names.
    pub fn nonzero(&self) -> Vec<String> {
        self.assumptions
            .iter()
            .filter_map(|a| a.strip_suffix("!= 0").map(|s| s.trim().to_string()))
            .collect()
    }
}

fn load() -> Vec<CatalogEntry> {
    let index: Vec<IndexEntry> =
        serde_json::from_str(INDEX).expect("bundled catalog index is valid JSON");
    index
        .into_iter()
        .map(|e| {
            let source = FILES
                .iter()
                .find(|(f, _)| *f == e.file)
                .map(|(_, s)| *s)
                .expect("catalog file is bundled");
            let mut ode = OdeSpec::parse(source)
                .unwrap_or_else(|err| panic!("catalog entry {}: {err}", e.id));
            for a in &e.assumptions {
                if let Some(s) = a.strip_suffix("!= 0").map(str::trim) {
                    if s != "hbar"
                        && !ode.nonzero.iter().any(|n| n == s)
                        && ode.params.iter().any(|p| p == s)
                    {
                        ode.nonzero.push(s.to_string());
                    }
                }
            }
            CatalogEntry {
                id: e.id,
                n: e.n,
                family: e.family,
                file: e.file,
                ode,
                expected_resonances: e.expected_resonances,
                resonance_source: e.resonance_source,
                assumptions: e.assumptions,
                potential: e.potential,
                y_part: e.y_part,
                notes: e.notes,
                erratum: e.erratum,
                embedding: e.embedding,
                source,
            }
        })
        .collect()
}

pub fn all() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(load)
}

pub fn ids() -> Vec<&'static str> {
    all().iter().map(|e| e.id.as_str()).collect()
}

pub fn get(id: &str) -> Result<&'static CatalogEntry> {
    all()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownCatalogId(id.to_string()))
}

/// Level at which the entry's ODE comes out of the compatibility conditions.
pub fn nlcc_level(entry: &CatalogEntry) -> usize {
    match entry.family {
        Family::I => entry.seed().top_level(),
        Family::II => 2,
    }
}

/// Match the x-part of the NLCC generated from the entry's seed against the
/// catalog ODE, solving for integration constants and then for the
/// catalog's own constants.
pub fn match_nlcc(entry: &CatalogEntry) -> Result<MatchReport> {
    let emb = &entry.embedding;
    let profile = match (emb.scale.as_str(), emb.shift, emb.omega.as_str()) {
        ("hbar^2", 1, "1") => Profile::FPrime,
        ("1", 0, "1") => Profile::Direct,
        _ => {
            return Err(Error::Invalid(format!(
                "{}: the potential is rescaled; use verify instead",
                entry.id
            )))
        }
    };
    let r = nlcc(&entry.seed(), nlcc_level(entry))?;
    let subs: BTreeMap<String, DPoly> = emb
        .x_subs
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_expr(v)?)))
        .collect::<Result<_>>()?;
    let catalog = entry.ode.eq.substitute(|s| match s {
        Symbol::Param(n) => subs.get(&**n).cloned(),
        _ => None,
    });
    let mut mine = r.constants.clone();
    mine.extend(r.odes.constants.iter().cloned());
    let unknowns: Vec<String> = ordered_params(&(&r.x_part + &catalog), &mine)
        .into_iter()
        .filter(|p| !["cgamma", "sgamma"].contains(&p.as_str()))
        .collect();
    match_ode(&r.x_part, &catalog, &entry.ode.dep, profile, &unknowns)
}
