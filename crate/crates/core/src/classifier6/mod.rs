//! Classification of six-dimensional monotone semifree Hamiltonian circle
//! actions by their topological fixed point data.

pub mod golden;
pub mod search;
pub mod tfd;

use std::collections::{BTreeMap, BTreeSet};

pub use golden::{golden_row, unlisted, GoldenRow, Unlisted, GOLDEN6, UNLISTED};
pub use search::{SearchConfig, SearchStats, DEFAULT_BOUND};
pub use tfd::{capacities, equivalent, flip, verify, Blueprint, Derived, ExtremalProfile, MaxKind, Tfd};

use crate::error::{Error, Result};

/// Surviving fixed point data for one profile and set of interior levels.
pub fn enumerate_tfd(profile: ExtremalProfile, crit: &BTreeSet<i64>) -> Result<Vec<Tfd>> {
    enumerate_tfd_with(profile, crit, &SearchConfig::default()).map(|(t, _)| t)
}

pub fn enumerate_tfd_with(
    profile: ExtremalProfile,
    crit: &BTreeSet<i64>,
    cfg: &SearchConfig,
) -> Result<(Vec<Tfd>, SearchStats)> {
    search::enumerate(profile.max_kind()?, crit, cfg)
}

#[derive(Clone, Debug)]
pub struct Classification {
    /// Survivors matched to the golden table, in table order.
    pub rows: Vec<Tfd>,
    /// Survivors with no golden row, labeled `unlisted-N`.
    pub extra: Vec<Tfd>,
    pub missing: Vec<&'static str>,
    pub stats: SearchStats,
}

impl Classification {
    pub fn is_exact(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }

    /// Golden rows followed by the unlisted survivors.
    pub fn all_rows(&self) -> impl Iterator<Item = &Tfd> {
        self.rows.iter().chain(self.extra.iter())
    }

    pub fn mismatch(&self) -> Option<Error> {
        if self.is_exact() {
            return None;
        }
        let extra: Vec<String> = self.extra.iter().map(|t| t.to_string()).collect();
        Some(Error::ClassificationMismatch(format!(
            "extra: [{}]; missing: [{}]",
            extra.join("; "),
            self.missing.join(", ")
        )))
    }

    pub fn into_exact(self) -> Result<Vec<Tfd>> {
        match self.mismatch() {
            Some(e) => Err(e),
            None => Ok(self.rows),
        }
    }
}

/// Runs every profile and interior level set for the given maxima and labels
/// the survivors against the golden table.
pub fn classify(maxima: &[MaxKind], cfg: &SearchConfig) -> Result<Classification> {
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    for &max in maxima {
        for crit in search::all_crit_sets() {
            let (ts, s) = search::enumerate(max, &crit, cfg)?;
            stats.merge(&s);
            found.extend(ts);
        }
    }
    let index: BTreeMap<Blueprint, (usize, &GoldenRow)> = GOLDEN6
        .iter()
        .enumerate()
        .filter(|(_, r)| maxima.contains(&r.max))
        .map(|(i, r)| (r.blueprint().canonical(), (i, r)))
        .collect();
    let mut labeled: Vec<(usize, Tfd)> = Vec::new();
    let mut extra = Vec::new();
    for mut t in found {
        let key = t.blueprint.clone().expect("search output carries its blueprint");
        match index.get(&key) {
            Some((i, r)) => {
                t.label = Some(r.label.to_string());
                labeled.push((*i, t));
            }
            None => extra.push(t),
        }
    }
    // Canonical blueprints are unique, so each golden row is hit at most once.
    let have: BTreeSet<usize> = labeled.iter().map(|(i, _)| *i).collect();
    debug_assert_eq!(have.len(), labeled.len());
    let mut missing: Vec<(usize, &'static str)> =
        index.values().filter(|(i, _)| !have.contains(i)).map(|(i, r)| (*i, r.label)).collect();
    missing.sort();
    labeled.sort_by_key(|(i, _)| *i);
    for (n, t) in extra.iter_mut().enumerate() {
        t.label = Some(format!("unlisted-{}", n + 1));
    }
    Ok(Classification {
        rows: labeled.into_iter().map(|(_, t)| t).collect(),
        extra,
        missing: missing.into_iter().map(|(_, l)| l).collect(),
        stats,
    })
}

pub fn classify_all_with(cfg: &SearchConfig) -> Result<Classification> {
    classify(&MaxKind::ALL, cfg)
}

/// The golden rows, labeled and in table order; any unlisted or missing row
/// is an error.
pub fn classify_all() -> Result<Vec<Tfd>> {
    classify_all_with(&SearchConfig::default())?.into_exact()
}
