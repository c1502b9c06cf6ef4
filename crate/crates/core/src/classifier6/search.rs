//! Exhaustive search for fixed point data with an isolated minimum.
//!
//! The unknowns are the maximum, the number of points at levels -1 and 1 and
//! the class of the level-0 surface in `P2 # k P2bar`. A cheap integer
//! prefilter discards classes that cannot satisfy area positivity or the
//! localization identities; each survivor is then replayed exactly, first
//! with the surface treated as one class and then for every splitting of
//! that class into disjoint components.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::lattice::{component_splittings, exceptional_set, CohClass, LatticeKind, SurfaceLattice, MAX_BLOWUPS};

use super::tfd::{check_slices, verify, Blueprint, MaxKind, Tfd};

pub const DEFAULT_BOUND: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Half-width of the coefficient box for level-0 classes.
    pub bound: i64,
    pub mode: ExecMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { bound: DEFAULT_BOUND, mode: ExecMode::Parallel }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub prefiltered: usize,
    pub sweep_survivors: usize,
    pub splittings: usize,
    pub survivors: usize,
    /// Largest coefficient magnitude over all survivors, to compare with the box.
    pub max_abs_coeff: i64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.prefiltered += other.prefiltered;
        self.sweep_survivors += other.sweep_survivors;
        self.splittings += other.splittings;
        self.survivors += other.survivors;
        self.max_abs_coeff = self.max_abs_coeff.max(other.max_abs_coeff);
    }
}

/// Counts of points at levels -1 and 1 allowed by Poincare duality:
/// `b_2 = b_4` forces `k_- = k_+` below a point maximum and `k_- = k_+ + 1`
/// below a sphere; a four-dimensional maximum sits at level 1 itself.
fn point_counts(max: MaxKind, crit: &BTreeSet<i64>) -> Vec<(usize, usize)> {
    let km: Vec<usize> = if crit.contains(&-1) { (1..=MAX_BLOWUPS).collect() } else { vec![0] };
    let kp: Vec<usize> = if crit.contains(&1) { (1..=MAX_BLOWUPS).collect() } else { vec![0] };
    let mut out = Vec::new();
    for &a in &km {
        for &b in &kp {
            let ok = match max {
                MaxKind::Point => a == b,
                MaxKind::Sphere => a == b + 1,
                MaxKind::FourManifold => b == 0,
            };
            if ok {
                out.push((a, b));
            }
        }
    }
    out
}

/// The `x^-2` and `x^-3` coefficients of the localization sums of `c_1`
/// and `1`, in closed form for an aggregated level-0 class. Both must
/// vanish; they are cross-checked against the exact engine in the tests.
pub(crate) fn identity_defects(max: MaxKind, km: usize, kp: usize, z: &[i64]) -> Option<(i64, i64)> {
    let kind = LatticeKind::BlowupOfP2(km);
    let mut e_minus = vec![1; km + 1];
    e_minus[0] = -1;
    let e_plus: Vec<i64> = e_minus.iter().zip(z).map(|(a, b)| a + b).collect();
    let vol = kind.pair_ints(&kind.anticanonical_ints(), z);
    let skew = kind.pair_ints(&e_plus, z) + kind.pair_ints(&e_minus, z);
    let (km, kp) = (km as i64, kp as i64);
    match max {
        MaxKind::Point => Some((6 - km - kp - vol, 1 - km + kp + skew - 1)),
        MaxKind::Sphere => {
            let d = -(kind.pair_ints(&e_plus, &e_plus) + kp);
            Some((3 - km - kp - vol + 2 - d, 1 - km + kp + skew + d))
        }
        MaxKind::FourManifold => None,
    }
}

/// Level-0 classes in the box passing the integer prefilter, one per orbit
/// of the permutations of the exceptional classes.
fn level_zero_classes(max: MaxKind, km: usize, kp: usize, a: i64, bound: i64) -> Vec<Vec<i64>> {
    let kind = LatticeKind::BlowupOfP2(km);
    // the slice above level 0 ends here
    let next = if kp > 0 { 1 } else { max.level() };
    // omega(next).E_i = 1 + next (1 + b_i) >= 0
    let b_lo = (-((1 + next) / next)).max(-bound);
    let exceptional = exceptional_set(kind);
    let mut out = Vec::new();
    let mut z = vec![a];
    descending(&mut z, km + 1, b_lo, bound, &mut |z| {
        let c1 = kind.anticanonical_ints();
        if kind.pair_ints(&c1, z) <= 0 {
            return;
        }
        if let Some((c1_defect, one_defect)) = identity_defects(max, km, kp, z) {
            if c1_defect != 0 || one_defect != 0 {
                return;
            }
        }
        // [omega_next] = c_1 - next (e_- + Z) with e_- = -u + sum E_i
        let w: Vec<i64> = c1
            .iter()
            .zip(z)
            .enumerate()
            .map(|(i, (c, b))| c - next * (if i == 0 { -1 } else { 1 } + b))
            .collect();
        if max == MaxKind::Point && kp == 0 {
            if w.iter().any(|x| *x != 0) {
                return;
            }
        } else if w[0] < 0 || exceptional.iter().any(|e| kind.pair_ints(&w, e) < 0) {
            return;
        }
        out.push(z.to_vec());
    });
    out
}

/// Extends `z` to length `len` with non-increasing entries in `[lo, hi]`.
fn descending(z: &mut Vec<i64>, len: usize, lo: i64, hi: i64, f: &mut dyn FnMut(&[i64])) {
    if z.len() == len {
        f(z);
        return;
    }
    let top = if z.len() >= 2 { z[z.len() - 1].min(hi) } else { hi };
    for b in (lo..=top).rev() {
        z.push(b);
        descending(z, len, lo, hi, f);
        z.pop();
    }
}

/// All fixed point data with the given maximum and interior critical
/// levels that pass the full predicate suite.
pub fn enumerate(max: MaxKind, crit: &BTreeSet<i64>, cfg: &SearchConfig) -> Result<(Vec<Tfd>, SearchStats)> {
    if crit.iter().any(|c| ![-1, 0, 1].contains(c)) {
        return Err(Error::InconsistentFixedPointData(format!("interior levels {crit:?} not within {{-1, 0, 1}}")));
    }
    if max == MaxKind::FourManifold && crit.contains(&1) {
        return Ok((Vec::new(), SearchStats::default()));
    }
    if cfg.bound < 3 {
        return Err(Error::BoundTooSmall { bound: cfg.bound, witness: "the box must have half-width at least 3".into() });
    }
    let mut stats = SearchStats::default();
    let counts = point_counts(max, crit);

    let aggregated: Vec<Blueprint> = if crit.contains(&0) {
        let tasks: Vec<(usize, usize, i64)> = counts
            .iter()
            .flat_map(|&(km, kp)| (-cfg.bound..=cfg.bound).map(move |a| (km, kp, a)))
            .collect();
        exec::flat_map(cfg.mode, &tasks, |&(km, kp, a)| {
            level_zero_classes(max, km, kp, a, cfg.bound)
                .into_iter()
                .map(|z| Blueprint::new(max, km, kp, vec![(z, 0)]))
                .collect()
        })
    } else {
        counts.iter().map(|&(km, kp)| Blueprint::new(max, km, kp, Vec::new())).collect()
    };
    stats.prefiltered = aggregated.len();

    // Exact sweep with the level-0 surface as a single class.
    let swept: Vec<Blueprint> = exec::filter_map(cfg.mode, &aggregated, |bp| {
        let t = Tfd::assemble(bp).ok()?;
        check_slices(&t).ok().map(|_| bp.clone())
    });
    stats.sweep_survivors = swept.len();

    let split: Vec<Blueprint> = exec::flat_map(cfg.mode, &swept, |bp| {
        if bp.surfaces.is_empty() {
            return vec![bp.clone()];
        }
        let lattice = SurfaceLattice::new(bp.lattice()).expect("k <= 8");
        let total = CohClass::from_ints(bp.lattice(), &bp.total());
        component_splittings(&lattice, &total, cfg.bound)
            .into_iter()
            .map(|parts| {
                let surfaces = parts.into_iter().map(|(c, g)| (c.to_ints().expect("integral"), g)).collect();
                Blueprint::new(bp.max, bp.k_minus, bp.k_plus, surfaces)
            })
            .collect()
    });
    stats.splittings = split.len();

    let verified: Vec<Tfd> = exec::filter_map(cfg.mode, &split, |bp| {
        let mut t = Tfd::assemble(bp).ok()?;
        t.derived = Some(verify(&t).ok()?);
        Some(t)
    });

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut t in verified {
        let bp = t.blueprint.take().expect("assembled from a blueprint");
        let width = bp.max_abs_coeff();
        stats.max_abs_coeff = stats.max_abs_coeff.max(width);
        if width >= cfg.bound {
            return Err(Error::BoundTooSmall { bound: cfg.bound, witness: format!("{bp:?}") });
        }
        let key = bp.canonical();
        if seen.insert(key.clone()) {
            if key != bp {
                // rebuild so the slices are written in the canonical labeling
                t = Tfd::assemble(&key)?;
                t.derived = Some(verify(&t)?);
            }
            t.blueprint = Some(key);
            out.push(t);
        }
    }
    out.sort_by(|a, b| a.blueprint.cmp(&b.blueprint));
    stats.survivors = out.len();
    Ok((out, stats))
}

/// Every subset of `{-1, 0, 1}`.
pub fn all_crit_sets() -> Vec<BTreeSet<i64>> {
    (0..8u32)
        .map(|m| [-1i64, 0, 1].iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, l)| *l).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::{integrate_components, Integrand};
    use crate::rational::q;

    #[test]
    fn descending_vectors() {
        let mut seen = Vec::new();
        descending(&mut vec![0], 3, -1, 1, &mut |z| seen.push(z.to_vec()));
        assert_eq!(seen.len(), 6);
        assert!(seen.iter().all(|z| z[1] >= z[2]));
    }

    #[test]
    fn closed_form_identities_match_localization() {
        let mut checked = 0;
        for max in [MaxKind::Point, MaxKind::Sphere] {
            for (km, kp) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
                let kind = LatticeKind::BlowupOfP2(km);
                let mut z = vec![0; km + 1];
                for a in -2..=4 {
                    for b in -2..=2 {
                        z[0] = a;
                        if km > 0 {
                            z[1] = b;
                        }
                        if kind.pair_ints(&kind.anticanonical_ints(), &z) <= 0 {
                            continue;
                        }
                        let Some(g) = crate::lattice::genus_ints(kind, &z) else { continue };
                        let bp = Blueprint::new(max, km, kp, vec![(z.clone(), g)]);
                        let Ok(t) = Tfd::assemble(&bp) else { continue };
                        let comps: Vec<_> = t.components().cloned().collect();
                        let c1 = integrate_components(&comps, Integrand::C1).unwrap();
                        let one = integrate_components(&comps, Integrand::One).unwrap();
                        let (dc1, done) = identity_defects(max, km, kp, &z).unwrap();
                        assert_eq!(c1.coefficient(-2), q(dc1), "{bp:?}");
                        assert_eq!(one.coefficient(-3), q(done), "{bp:?}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20, "only {checked} blueprints assembled");
    }

    #[test]
    fn quadric_is_the_only_point_point_data_through_zero() {
        let crit: BTreeSet<i64> = [0].into();
        let (ts, _) = enumerate(MaxKind::Point, &crit, &SearchConfig::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].blueprint.as_ref().unwrap().surfaces, vec![(vec![2], 0)]);
    }
}
