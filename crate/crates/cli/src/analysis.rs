//! Paired DI / AP comparison: knee location, dominance and restricted hypervolume.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use apdi_core::metrics::{classify_knee_relation, hypervolume, joint_reference_point, restrict_to_region, KneeRelation};
use apdi_core::preference::find_knee;
use apdi_core::{Objectives, Region};

use crate::artifacts::LoadedRun;

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub seed: u64,
    pub di_knee: Objectives,
    pub knee_in_region: bool,
    pub relation: KneeRelation,
    pub di_in_region: usize,
    pub ap_in_region: usize,
    pub di_hypervolume: f64,
    pub ap_hypervolume: f64,
}

impl PairReport {
    pub fn ap_at_least_di(&self) -> bool {
        self.ap_hypervolume >= self.di_hypervolume
    }
}

/// Compares one DI front with the AP front and final region of the same seed.
pub fn compare_pair(
    seed: u64,
    di_front: &[Objectives],
    ap_front: &[Objectives],
    region: &Region,
    epsilon_fraction: f64,
) -> Result<PairReport> {
    if di_front.is_empty() || ap_front.is_empty() {
        bail!("seed {seed}: empty front");
    }
    let knee = find_knee(di_front, epsilon_fraction).knee;
    let comparison = classify_knee_relation(knee.as_slice(), ap_front, region)
        .with_context(|| format!("seed {seed}: AP front"))?;

    let di_sel: Vec<&Objectives> = restrict_to_region(di_front, region).into_iter().map(|i| &di_front[i]).collect();
    let ap_sel: Vec<&Objectives> = restrict_to_region(ap_front, region).into_iter().map(|i| &ap_front[i]).collect();
    let (di_hv, ap_hv) = match joint_reference_point::<f64, _>(&[&di_sel[..], &ap_sel[..]]) {
        Some(reference) => (hypervolume(&di_sel, &reference), hypervolume(&ap_sel, &reference)),
        None => (0.0, 0.0),
    };

    Ok(PairReport {
        seed,
        di_knee: knee,
        knee_in_region: comparison.knee_in_region,
        relation: comparison.relation,
        di_in_region: di_sel.len(),
        ap_in_region: ap_sel.len(),
        di_hypervolume: di_hv,
        ap_hypervolume: ap_hv,
    })
}

/// Pairs runs by seed; every seed must appear exactly once on both sides.
pub fn pair_runs<'a>(di: &'a [LoadedRun], ap: &'a [LoadedRun]) -> Result<Vec<(&'a LoadedRun, &'a LoadedRun)>> {
    let index = |runs: &'a [LoadedRun], side: &str| -> Result<BTreeMap<u64, &'a LoadedRun>> {
        let mut map = BTreeMap::new();
        for r in runs {
            if map.insert(r.manifest.config.seed, r).is_some() {
                bail!("{side} side has seed {} more than once", r.manifest.config.seed);
            }
        }
        Ok(map)
    };
    let di_map = index(di, "DI")?;
    let ap_map = index(ap, "AP")?;
    let only_di: Vec<u64> = di_map.keys().filter(|s| !ap_map.contains_key(s)).copied().collect();
    let only_ap: Vec<u64> = ap_map.keys().filter(|s| !di_map.contains_key(s)).copied().collect();
    if !only_di.is_empty() || !only_ap.is_empty() {
        bail!("mismatched seeds: DI only {only_di:?}, AP only {only_ap:?}");
    }
    let mut pairs = Vec::with_capacity(di_map.len());
    for (seed, d) in &di_map {
        let a = ap_map[seed];
        if d.manifest.config.problem != a.manifest.config.problem {
            bail!("seed {seed}: DI ran {} but AP ran {}", d.manifest.config.problem, a.manifest.config.problem);
        }
        if d.manifest.config.algorithm.uses_preference() || !a.manifest.config.algorithm.uses_preference() {
            bail!(
                "seed {seed}: expected a DI run and an AP run, got {} and {}",
                d.manifest.config.algorithm,
                a.manifest.config.algorithm
            );
        }
        pairs.push((*d, a));
    }
    Ok(pairs)
}

pub fn analyze_runs(di: &[LoadedRun], ap: &[LoadedRun]) -> Result<Vec<PairReport>> {
    pair_runs(di, ap)?
        .into_iter()
        .map(|(d, a)| {
            let seed = d.manifest.config.seed;
            let region = a
                .final_region()
                .with_context(|| format!("seed {seed}: AP run in {} has no region events", a.dir.display()))?;
            compare_pair(seed, &d.front, &a.front, &region, d.manifest.config.epsilon_fraction)
        })
        .collect()
}

/// Counts in the five-row layout (in region: three relations; outside: two).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelationTable {
    pub in_incomparable: usize,
    pub in_dominated: usize,
    pub in_dominating: usize,
    pub out_incomparable: usize,
    pub out_dominated: usize,
    /// Not part of the five-row layout; reported separately when non-zero.
    pub out_dominating: usize,
}

impl RelationTable {
    pub fn from_reports(reports: &[PairReport]) -> Self {
        let mut t = RelationTable::default();
        for r in reports {
            let cell = match (r.knee_in_region, r.relation) {
                (true, KneeRelation::Incomparable) => &mut t.in_incomparable,
                (true, KneeRelation::Dominated) => &mut t.in_dominated,
                (true, KneeRelation::Dominating) => &mut t.in_dominating,
                (false, KneeRelation::Incomparable) => &mut t.out_incomparable,
                (false, KneeRelation::Dominated) => &mut t.out_dominated,
                (false, KneeRelation::Dominating) => &mut t.out_dominating,
            };
            *cell += 1;
        }
        t
    }

    pub fn in_region(&self) -> usize {
        self.in_incomparable + self.in_dominated + self.in_dominating
    }

    pub fn dominating(&self) -> usize {
        self.in_dominating + self.out_dominating
    }

    pub fn dominated(&self) -> usize {
        self.in_dominated + self.out_dominated
    }
}

fn join(v: &Objectives) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Tab-separated report: one row per pair, then the aggregate table.
pub fn render_report(reports: &[PairReport]) -> String {
    let mut out = String::new();
    writeln!(out, "# apdi-analysis v1").unwrap();
    writeln!(
        out,
        "seed\tdi_knee\tknee_in_region\trelation\tdi_in_region\tap_in_region\tdi_hypervolume\tap_hypervolume\tap_ge_di"
    )
    .unwrap();
    for r in reports {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.seed,
            join(&r.di_knee),
            r.knee_in_region,
            r.relation.as_str(),
            r.di_in_region,
            r.ap_in_region,
            r.di_hypervolume,
            r.ap_hypervolume,
            r.ap_at_least_di()
        )
        .unwrap();
    }
    let t = RelationTable::from_reports(reports);
    writeln!(out, "# summary").unwrap();
    writeln!(out, "location\trelation\tcount").unwrap();
    writeln!(out, "in preference region\tIncomparable\t{}", t.in_incomparable).unwrap();
    writeln!(out, "in preference region\tDominated\t{}", t.in_dominated).unwrap();
    writeln!(out, "in preference region\tDominating\t{}", t.in_dominating).unwrap();
    writeln!(out, "outside p-region\tIncomparable\t{}", t.out_incomparable).unwrap();
    writeln!(out, "outside p-region\tDominated\t{}", t.out_dominated).unwrap();
    if t.out_dominating > 0 {
        writeln!(out, "outside p-region\tDominating\t{}", t.out_dominating).unwrap();
    }
    let wins = reports.iter().filter(|r| r.ap_at_least_di()).count();
    writeln!(out, "# restricted hypervolume ap >= di: {wins}/{}", reports.len()).unwrap();
    out
}
