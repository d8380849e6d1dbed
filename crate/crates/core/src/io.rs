//! Group-spec ingestion and JSON reports.
//!
//! Reports contain no timings or paths, so identical inputs give
//! byte-identical output.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::corpus::{self, NamedGroup};
use crate::error::{Error, Result};
use crate::fusion::RealizedFusionSystem;
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::protoessential::{ConjugacyMode, RankTestMode, Scan, Stage, StageCounts};
use crate::structure::thompson;
use crate::table::{ElemSet, FiniteGroup};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

type Cycles = Vec<Vec<usize>>;

/// `{"name", "degree", "generators": [[cycle, ...], ...]}` with 1-based points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Cycles>,
}

impl GroupSpec {
    pub fn from_group(name: &str, g: &PermGroup) -> Self {
        GroupSpec {
            name: name.to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(Permutation::to_cycles).collect(),
        }
    }

    pub fn build(&self, location: &str) -> Result<PermGroup> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, cycles) in self.generators.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            if cycles.iter().flatten().any(|&x| !seen.insert(x)) {
                return Err(Error::Parse {
                    location: format!("{}: generators[{}]", location, i),
                    message: "cycles overlap".into(),
                });
            }
            gens.push(Permutation::from_cycles(self.degree, cycles)?);
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

pub fn parse_group_spec_str(text: &str, location: &str) -> Result<NamedGroup> {
    let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("{}:{}:{}", location, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let group = spec.build(location)?;
    Ok(NamedGroup { name: spec.name, group })
}

pub fn parse_group_spec(path: &Path) -> Result<NamedGroup> {
    let text = std::fs::read_to_string(path)?;
    parse_group_spec_str(&text, &path.display().to_string())
}

/// `corpus:NAME` or `file:PATH`.
pub fn resolve_group(arg: &str) -> Result<NamedGroup> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        corpus::build(name)
    } else if let Some(path) = arg.strip_prefix("file:") {
        parse_group_spec(Path::new(path))
    } else {
        Err(Error::input(format!("group must be corpus:NAME or file:PATH, got {:?}", arg)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub prime: u64,
    pub mode: ConjugacyMode,
    pub rank_test: RankTestMode,
    pub diagnostic: bool,
    pub seed: u64,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupRecord {
    pub order: usize,
    pub generators: Vec<Cycles>,
}

impl SubgroupRecord {
    pub fn of_set(t: &FiniteGroup, set: &ElemSet) -> Self {
        SubgroupRecord {
            order: FiniteGroup::size(set),
            generators: t.generators(set).iter().map(|&g| t.element(g).to_cycles()).collect(),
        }
    }

    pub fn of_group(g: &PermGroup) -> Self {
        SubgroupRecord {
            order: g.order() as usize,
            generators: g.generators().iter().map(Permutation::to_cycles).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorRecord {
    #[serde(flatten)]
    pub subgroup: SubgroupRecord,
    pub class: usize,
    pub class_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub class: usize,
    pub order: usize,
    pub stage: Stage,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub version: String,
    pub config: RunConfig,
    pub group: String,
    pub prime: u64,
    pub mode: ConjugacyMode,
    pub stage_counts: StageCounts,
    pub survivors: Vec<SurvivorRecord>,
    pub traces: Vec<TraceRecord>,
}

pub fn pipeline_report(name: &str, scan: &Scan, config: &RunConfig) -> PipelineReport {
    let t = &scan.table;
    let mut survivors = Vec::new();
    let mut traces = Vec::new();
    for (i, c) in scan.classes.iter().enumerate() {
        let order = FiniteGroup::size(&c.representative);
        if c.survived {
            survivors.push(SurvivorRecord {
                subgroup: SubgroupRecord::of_set(t, &c.representative),
                class: i,
                class_size: c.members.len(),
            });
        }
        for o in &c.outcomes {
            traces.push(TraceRecord {
                class: i,
                order,
                stage: o.stage,
                passed: o.passed,
                detail: o.detail.clone(),
                vacuous: o.vacuous,
            });
        }
    }
    PipelineReport {
        version: VERSION.into(),
        config: config.clone(),
        group: name.into(),
        prime: scan.prime,
        mode: scan.config.mode,
        stage_counts: scan.stage_counts,
        survivors,
        traces,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialFlags {
    pub fully_normalized: bool,
    pub centric: bool,
    pub radical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialRecord {
    pub order: usize,
    pub generators: Vec<Cycles>,
    pub class_size: usize,
    #[serde(rename = "outF_order")]
    pub out_f_order: u64,
    pub spe_witness_order: u64,
    pub flags: EssentialFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureRecord {
    #[serde(flatten)]
    pub subgroup: SubgroupRecord,
    pub weakly_closed: bool,
    pub strongly_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialReport {
    pub version: String,
    pub config: RunConfig,
    pub group: String,
    pub prime: u64,
    pub sylow: SubgroupRecord,
    pub classes: Vec<EssentialRecord>,
    pub focal: SubgroupRecord,
    pub hyperfocal: SubgroupRecord,
    pub thompson: ClosureRecord,
}

fn closure_record(f: &RealizedFusionSystem, id: usize) -> ClosureRecord {
    let flags = f.closure_flags(id);
    ClosureRecord {
        subgroup: SubgroupRecord::of_set(f.sylow_table(), &f.subgroups()[id]),
        weakly_closed: flags.weakly_closed,
        strongly_closed: flags.strongly_closed,
    }
}

/// Id of `J(S)` in the fusion system.
pub fn thompson_id(f: &RealizedFusionSystem) -> usize {
    let t = f.sylow_table();
    let j = thompson(t, &t.full(), f.prime());
    f.id_of_set(&j).expect("J(S) is a subgroup")
}

pub fn essential_report(name: &str, f: &RealizedFusionSystem, config: &RunConfig) -> Result<EssentialReport> {
    let t = f.sylow_table();
    let classes = f
        .essential_classes()?
        .into_iter()
        .map(|c| EssentialRecord {
            order: f.subgroup_order(c.representative),
            generators: SubgroupRecord::of_set(t, &f.subgroups()[c.representative]).generators,
            class_size: c.members.len(),
            out_f_order: c.out_f_order,
            spe_witness_order: c.witness.order(),
            flags: EssentialFlags {
                fully_normalized: c.fully_normalized,
                centric: c.centric,
                radical: c.radical,
            },
        })
        .collect();
    let (foc, hyp) = f.focal_and_hyperfocal_sets()?;
    Ok(EssentialReport {
        version: VERSION.into(),
        config: config.clone(),
        group: name.into(),
        prime: f.prime(),
        sylow: SubgroupRecord::of_set(t, &t.full()),
        classes,
        focal: SubgroupRecord::of_set(t, &foc),
        hyperfocal: SubgroupRecord::of_set(t, &hyp),
        thompson: closure_record(f, thompson_id(f)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationRecord {
    #[serde(flatten)]
    pub subgroup: SubgroupRecord,
    pub class_size: usize,
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub fully_automized: bool,
    pub receptive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub version: String,
    pub config: RunConfig,
    pub group: String,
    pub prime: u64,
    pub saturated: bool,
    pub alperin_generated: bool,
    /// One record per F-class, for its first fully normalised member.
    pub classes: Vec<SaturationRecord>,
}

pub fn saturation_report(name: &str, f: &RealizedFusionSystem, config: &RunConfig) -> Result<SaturationReport> {
    let t = f.sylow_table();
    let classes = f
        .classes()
        .iter()
        .map(|cls| {
            let rep = *cls.iter().find(|&&a| f.is_fully_normalized(a)).expect("class has a maximum");
            let flags = f.saturation_flags(rep);
            SaturationRecord {
                subgroup: SubgroupRecord::of_set(t, &f.subgroups()[rep]),
                class_size: cls.len(),
                fully_normalized: flags.fully_normalized,
                fully_centralized: flags.fully_centralized,
                fully_automized: flags.fully_automized,
                receptive: flags.receptive,
            }
        })
        .collect();
    Ok(SaturationReport {
        version: VERSION.into(),
        config: config.clone(),
        group: name.into(),
        prime: f.prime(),
        saturated: f.is_saturated(),
        alperin_generated: f.alperin_generation_check()?,
        classes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FocalReport {
    pub version: String,
    pub config: RunConfig,
    pub group: String,
    pub prime: u64,
    pub focal: SubgroupRecord,
    pub hyperfocal: SubgroupRecord,
    /// `S ∩ [G,G]`.
    pub sylow_meet_derived: SubgroupRecord,
    /// `S ∩ O^p(G)`.
    pub sylow_meet_residual: SubgroupRecord,
    pub focal_agrees: bool,
    pub hyperfocal_agrees: bool,
}

pub fn focal_report(name: &str, f: &RealizedFusionSystem, config: &RunConfig) -> Result<FocalReport> {
    let t = f.sylow_table();
    let (foc, hyp) = f.focal_and_hyperfocal_sets()?;
    let s = f.sylow();
    let derived = t.set_of(&s.intersection(&f.ambient().derived_subgroup())?)?;
    let residual = t.set_of(&s.intersection(&f.ambient().p_residual(f.prime())?)?)?;
    Ok(FocalReport {
        version: VERSION.into(),
        config: config.clone(),
        group: name.into(),
        prime: f.prime(),
        focal: SubgroupRecord::of_set(t, &foc),
        hyperfocal: SubgroupRecord::of_set(t, &hyp),
        sylow_meet_derived: SubgroupRecord::of_set(t, &derived),
        sylow_meet_residual: SubgroupRecord::of_set(t, &residual),
        focal_agrees: foc == derived,
        hyperfocal_agrees: hyp == residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub version: String,
    pub config: RunConfig,
    pub group: String,
    pub prime: u64,
    pub thompson: ClosureRecord,
    /// One record per F-class, for its first fully normalised member.
    pub classes: Vec<ClosureRecord>,
}

pub fn closure_report(name: &str, f: &RealizedFusionSystem, config: &RunConfig) -> ClosureReport {
    let classes = f
        .classes()
        .iter()
        .map(|cls| {
            let rep = *cls.iter().find(|&&a| f.is_fully_normalized(a)).expect("class has a maximum");
            closure_record(f, rep)
        })
        .collect();
    ClosureReport {
        version: VERSION.into(),
        config: config.clone(),
        group: name.into(),
        prime: f.prime(),
        thompson: closure_record(f, thompson_id(f)),
        classes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusListing {
    pub version: String,
    pub groups: Vec<corpus::CorpusEntry>,
}

pub fn corpus_listing() -> CorpusListing {
    CorpusListing {
        version: VERSION.into(),
        groups: corpus::bundled(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = r#"{"name": "S4", "degree": 4, "generators": [[[1,2,3,4]], [[1,2]]]}"#;
        let g = parse_group_spec_str(text, "inline").unwrap();
        assert_eq!(g.group.order(), 24);
        let emitted = GroupSpec::from_group(&g.name, &g.group).to_json();
        let again = parse_group_spec_str(&emitted, "emitted").unwrap();
        assert_eq!(GroupSpec::from_group(&again.name, &again.group).to_json(), emitted);
    }

    #[test]
    fn malformed_specs() {
        let overlap = r#"{"name": "bad", "degree": 3, "generators": [[[1,2],[2,3]]]}"#;
        assert!(matches!(parse_group_spec_str(overlap, "x"), Err(Error::Parse { .. })));
        let unknown = r#"{"name": "bad", "degree": 3, "gens": []}"#;
        assert!(matches!(parse_group_spec_str(unknown, "x"), Err(Error::Parse { .. })));
        let range = r#"{"name": "bad", "degree": 3, "generators": [[[1,4]]]}"#;
        assert!(matches!(parse_group_spec_str(range, "x"), Err(Error::Input(_))));
        assert!(resolve_group("nonsense").is_err());
    }
}
