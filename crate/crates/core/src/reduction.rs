//! The reduced spaces `M_t = H^{-1}(t)/S^1` as `t` sweeps the moment interval.
//!
//! Between critical levels the reduced class is affine in `t`:
//! `[omega_t] = anchor - (t - t0) e`, where `e` is the Euler class of the
//! circle bundle over the slice. Crossing a level with index-two points blows
//! up, crossing interior surfaces shifts `e`, and crossing index-four points
//! blows down.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    blow_down, blow_up_embedding, exceptional_set, new_exceptional_classes, CohClass, LatticeKind,
};
use crate::localization::{ComponentKind, FixedComponentSpec};
use crate::rational::{frac, q, show, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceState {
    pub lattice: LatticeKind,
    pub anchor_level: Rational,
    pub anchor: CohClass,
    pub euler: CohClass,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingEvent {
    pub level: i64,
    pub components: Vec<FixedComponentSpec>,
}

impl CrossingEvent {
    pub fn new(level: i64, components: Vec<FixedComponentSpec>) -> Self {
        CrossingEvent { level, components }
    }
}

impl SliceState {
    /// `[omega_t]`, extended affinely past the interval if asked.
    pub fn omega(&self, t: &Rational) -> CohClass {
        &self.anchor - &self.euler.scale(&(t - &self.anchor_level))
    }

    pub fn dh(&self, t: &Rational) -> Result<Rational> {
        if t < &self.lo || t > &self.hi {
            return Err(Error::OutOfInterval { t: show(t), lo: show(&self.lo), hi: show(&self.hi) });
        }
        Ok(self.omega(t).square())
    }

    /// Coefficients `[c0, c1, c2]` of `DH(t) = c0 + c1 t + c2 t^2`.
    pub fn dh_polynomial(&self) -> [Rational; 3] {
        let p = &self.anchor + &self.euler.scale(&self.anchor_level);
        [p.square(), -(p.dot(&self.euler) * q(2)), self.euler.square()]
    }

    pub fn with_hi(&self, hi: Rational) -> SliceState {
        SliceState { hi, ..self.clone() }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / q(2)
    }

    /// Symplectic areas at `t` of the curve classes used for positivity.
    pub fn curve_areas(&self, t: &Rational) -> Vec<(CohClass, Rational)> {
        let w = self.omega(t);
        curve_classes(self.lattice).into_iter().map(|c| {
            let a = w.dot(&c);
            (c, a)
        }).collect()
    }
}

/// Classes that must have positive area under any symplectic form in the
/// monotone chamber: all exceptional classes and the line for blow-ups of
/// the plane, both rulings for the product of spheres.
pub fn curve_classes(kind: LatticeKind) -> Vec<CohClass> {
    match kind {
        LatticeKind::ProductOfSpheres => {
            vec![CohClass::from_ints(kind, &[1, 0]), CohClass::from_ints(kind, &[0, 1])]
        }
        LatticeKind::BlowupOfP2(_) => std::iter::once(CohClass::u(kind))
            .chain(exceptional_set(kind).iter().map(|v| CohClass::from_ints(kind, v)))
            .collect(),
    }
}

/// The slice just above a minimum. Its interval ends at 3, the top of the
/// balanced range; [`sweep`] trims it to the next critical level.
pub fn initial_slice(min: &FixedComponentSpec) -> Result<SliceState> {
    min.validate()?;
    if !min.is_minimum() {
        return Err(Error::NotAMinimum(format!("{min:?}")));
    }
    let level = q(min.level);
    let (lattice, anchor, euler) = match &min.kind {
        ComponentKind::IsolatedPoint { .. } => {
            let l = LatticeKind::BlowupOfP2(0);
            (l, CohClass::zero(l), CohClass::from_ints(l, &[-1]))
        }
        ComponentKind::ExtremalSurface { normal_degrees: (d1, d2) } => {
            let b = d1 + d2;
            if b < -1 {
                return Err(Error::InvalidFixedComponent(format!("minimal sphere has area {}", 2 + b)));
            }
            // the slice is a sphere bundle over the minimum whose fiber F has area 2 + b
            // and e.F = -1, e.e = -b
            let (l, fiber, e) = if b.rem_euclid(2) == 1 {
                let l = LatticeKind::BlowupOfP2(1);
                (l, CohClass::from_ints(l, &[1, -1]), CohClass::from_ints(l, &[(b - 1) / 2, -(b + 1) / 2]))
            } else {
                let l = LatticeKind::ProductOfSpheres;
                (l, CohClass::from_ints(l, &[1, 0]), CohClass::from_ints(l, &[b / 2, -1]))
            };
            (l, fiber.scale(&q(2 + b)), e)
        }
        ComponentKind::ExtremalFourManifold { lattice, euler_at_boundary } => {
            let anchor = &CohClass::anticanonical(*lattice) + euler_at_boundary;
            (*lattice, anchor, euler_at_boundary.clone())
        }
        ComponentKind::InteriorSurface { .. } => unreachable!("interior surfaces are never minima"),
    };
    Ok(SliceState { lattice, anchor_level: level.clone(), anchor, euler, lo: level, hi: q(3) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingType {
    BlowUp(usize),
    Surfaces,
    BlowDown(usize),
}

pub fn crossing_type(ev: &CrossingEvent) -> Result<CrossingType> {
    let bad = || Error::InconsistentFixedPointData(format!("mixed or extremal components at level {}", ev.level));
    let n = ev.components.len();
    if n == 0 {
        return Err(bad());
    }
    let index_of = |i: usize| ev.components.iter().all(|c| matches!(c.kind, ComponentKind::IsolatedPoint { .. }) && c.index() == i);
    if index_of(2) {
        Ok(CrossingType::BlowUp(n))
    } else if index_of(4) {
        Ok(CrossingType::BlowDown(n))
    } else if ev.components.iter().all(|c| matches!(c.kind, ComponentKind::InteriorSurface { .. })) {
        Ok(CrossingType::Surfaces)
    } else {
        Err(bad())
    }
}

/// Exceptional classes whose area tends to 0 as `t` rises to `level`.
pub fn vanishing_classes(state: &SliceState, level: i64) -> Vec<Vec<i64>> {
    let w = state.omega(&q(level));
    exceptional_set(state.lattice)
        .iter()
        .filter(|c| w.dot(&CohClass::from_ints(state.lattice, c)).is_zero())
        .cloned()
        .collect()
}

/// The slice just above `ev.level`, given the slice just below it. Like
/// [`initial_slice`], it runs up to 3 until the next level trims it.
pub fn cross(state: &SliceState, ev: &CrossingEvent) -> Result<SliceState> {
    let level = q(ev.level);
    if level <= state.lo || level > state.hi {
        return Err(Error::OutOfInterval { t: show(&level), lo: show(&state.lo), hi: show(&state.hi) });
    }
    for c in &ev.components {
        c.validate()?;
        if c.level != ev.level {
            return Err(Error::InconsistentFixedPointData(format!("component at {} in event at {}", c.level, ev.level)));
        }
    }
    let w = state.omega(&level);
    let next = |lattice, anchor, euler| SliceState {
        lattice,
        anchor_level: level.clone(),
        anchor,
        euler,
        lo: level.clone(),
        hi: q(3),
    };
    match crossing_type(ev)? {
        CrossingType::BlowUp(m) => {
            let map = blow_up_embedding(state.lattice, m)?;
            let mut e = map.apply(&state.euler)?;
            for ex in new_exceptional_classes(&map, m) {
                e = &e + &ex;
            }
            Ok(next(map.target, map.apply(&w)?, e))
        }
        CrossingType::Surfaces => {
            let mut e = state.euler.clone();
            for c in &ev.components {
                if let ComponentKind::InteriorSurface { class, .. } = &c.kind {
                    if class.lattice() != state.lattice {
                        return Err(Error::LatticeMismatch(class.lattice().to_string(), state.lattice.to_string()));
                    }
                    e = &e + class;
                }
            }
            Ok(next(state.lattice, w, e))
        }
        CrossingType::BlowDown(m) => {
            let vanishing = vanishing_classes(state, ev.level);
            if vanishing.len() != m {
                return Err(Error::VanishingCycleMismatch { level: ev.level, expected: m, found: vanishing.len() });
            }
            let mut e = state.euler.clone();
            for c in &vanishing {
                let c = CohClass::from_ints(state.lattice, c);
                let slope = state.euler.dot(&c);
                if slope != q(1) {
                    return Err(Error::AreaContinuityViolation(format!(
                        "vanishing class {c} has e.C = {} instead of 1",
                        show(&slope)
                    )));
                }
                e = &e + &c;
            }
            let map = blow_down(state.lattice, &vanishing)?;
            Ok(next(map.target, map.apply(&w)?, map.apply(&e)?))
        }
    }
}

/// Replays a sweep: `events` runs from the minimum to the maximum, and the
/// result has one slice per open interval between consecutive levels.
pub fn sweep(events: &[CrossingEvent]) -> Result<Vec<SliceState>> {
    let (first, rest) = events.split_first().ok_or_else(|| Error::InconsistentFixedPointData("no events".into()))?;
    let (last, interior) = rest.split_last().ok_or_else(|| Error::InconsistentFixedPointData("no maximum".into()))?;
    let [min] = first.components.as_slice() else {
        return Err(Error::InconsistentFixedPointData("the minimum must be connected".into()));
    };
    let mut slices = vec![initial_slice(min)?];
    for ev in interior {
        let prev = slices.last_mut().expect("nonempty");
        *prev = prev.with_hi(q(ev.level));
        let s = cross(prev, ev)?;
        slices.push(s);
    }
    let top = slices.last_mut().expect("nonempty");
    if q(last.level) <= top.lo || q(last.level) > top.hi {
        return Err(Error::OutOfInterval { t: last.level.to_string(), lo: show(&top.lo), hi: show(&top.hi) });
    }
    *top = top.with_hi(q(last.level));
    Ok(slices)
}

/// `DH_-(c + s) - DH_+(c + s)` as coefficients in `s`, where `c` is the
/// common endpoint and both quadratics are continued across it.
pub fn dh_jump(before: &SliceState, after: &SliceState) -> Result<[Rational; 3]> {
    if before.hi != after.lo {
        return Err(Error::NotAdjacentSlices(format!(
            "({}, {}) and ({}, {})",
            show(&before.lo),
            show(&before.hi),
            show(&after.lo),
            show(&after.hi)
        )));
    }
    let c = &before.hi;
    let shifted = |s: &SliceState| {
        let w = s.omega(c);
        [w.square(), -(w.dot(&s.euler) * q(2)), s.euler.square()]
    };
    let (a, b) = (shifted(before), shifted(after));
    Ok([&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]])
}

/// Whether crossing `k` index-two points drops DH by exactly `k s^2`.
pub fn check_dh_decrease(before: &SliceState, after: &SliceState, k: usize) -> Result<bool> {
    let jump = dh_jump(before, after)?;
    Ok(jump == [Rational::zero(), Rational::zero(), q(k as i64)])
}

/// `(b_max, area of Z_max)` for the slice below a sphere maximum.
pub fn bmax_from_euler(state: &SliceState) -> Result<(i64, Rational)> {
    if state.lattice.rank() != 2 || state.hi != q(2) {
        return Err(Error::NotASphereMaximum(format!(
            "slice over {} ending at {}",
            state.lattice,
            show(&state.hi)
        )));
    }
    let b = -state.euler.square();
    let b = crate::rational::to_i64(&b).ok_or_else(|| Error::InternalArithmeticError(format!("b_max = {}", show(&b))))?;
    Ok((b, q(2 + b)))
}

/// Whether the quadratic `c0 + c1 t + c2 t^2` is positive on the open interval.
pub fn positive_on_open(poly: &[Rational; 3], lo: &Rational, hi: &Rational) -> bool {
    let f = |t: &Rational| &poly[0] + &poly[1] * t + &poly[2] * t * t;
    let mid = (lo + hi) / q(2);
    if f(lo).is_negative() || f(hi).is_negative() || !f(&mid).is_positive() {
        return false;
    }
    if poly[2].is_positive() {
        let vertex = -&poly[1] / (&poly[2] * q(2));
        if &vertex > lo && &vertex < hi && !f(&vertex).is_positive() {
            return false;
        }
    }
    true
}

/// Positivity of the reduced form on the open interval of `state`: positive
/// DH and positive area on every curve class.
pub fn check_open_positivity(state: &SliceState) -> Result<()> {
    if !positive_on_open(&state.dh_polynomial(), &state.lo, &state.hi) {
        return Err(Error::InconsistentFixedPointData(format!(
            "DH is not positive on ({}, {})",
            show(&state.lo),
            show(&state.hi)
        )));
    }
    let at_lo = state.curve_areas(&state.lo);
    let at_hi = state.curve_areas(&state.hi);
    for ((c, a), (_, b)) in at_lo.iter().zip(&at_hi) {
        if a.is_negative() || b.is_negative() || (a.is_zero() && b.is_zero()) {
            return Err(Error::InconsistentFixedPointData(format!(
                "{c} has area {} .. {} on ({}, {})",
                show(a),
                show(b),
                show(&state.lo),
                show(&state.hi)
            )));
        }
    }
    Ok(())
}

/// Strict positivity of `[omega_t]` at a level where the reduced space is a
/// smooth symplectic four-manifold.
pub fn check_level_positivity(state: &SliceState, t: &Rational) -> Result<()> {
    let w = state.omega(t);
    if !w.square().is_positive() {
        return Err(Error::InconsistentFixedPointData(format!("[omega]^2 = {} at {}", show(&w.square()), show(t))));
    }
    for (c, a) in state.curve_areas(t) {
        if !a.is_positive() {
            return Err(Error::InconsistentFixedPointData(format!("{c} has area {} at {}", show(&a), show(t))));
        }
    }
    Ok(())
}

/// Conditions at the maximum on the topmost slice.
pub fn check_maximum(state: &SliceState, max: &FixedComponentSpec) -> Result<()> {
    let bad = |m: String| Err(Error::InconsistentFixedPointData(m));
    max.validate()?;
    if !max.is_maximum() || q(max.level) != state.hi {
        return bad(format!("{max:?} is not a maximum at {}", show(&state.hi)));
    }
    let top = state.omega(&state.hi);
    match &max.kind {
        ComponentKind::IsolatedPoint { .. } => {
            if state.lattice != LatticeKind::BlowupOfP2(0) || !top.is_zero() || state.euler.square() != q(1) {
                return bad(format!("slice below the point maximum is {} with omega {top}", state.lattice));
            }
        }
        ComponentKind::ExtremalSurface { normal_degrees: (d1, d2) } => {
            let (b, area) = bmax_from_euler(state)?;
            if b != d1 + d2 {
                return bad(format!("sphere maximum has degree {} but -e.e = {b}", d1 + d2));
            }
            if area < q(1) {
                return bad(format!("sphere maximum has area {}", show(&area)));
            }
            let fibers: Vec<CohClass> = match state.lattice {
                LatticeKind::ProductOfSpheres => vec![
                    CohClass::from_ints(state.lattice, &[1, 0]),
                    CohClass::from_ints(state.lattice, &[0, 1]),
                ],
                _ => vec![CohClass::from_ints(state.lattice, &[1, -1])],
            };
            let ok = fibers
                .iter()
                .any(|f| top == f.scale(&area) && state.euler.dot(f) == q(1));
            if !ok {
                return bad(format!("omega({}) = {top} is not {} times a fiber", show(&state.hi), show(&area)));
            }
        }
        ComponentKind::ExtremalFourManifold { lattice, euler_at_boundary } => {
            if *lattice != state.lattice || euler_at_boundary != &state.euler {
                return bad(format!("maximum {lattice} with e = {euler_at_boundary} does not fit the slice"));
            }
            if top != &CohClass::anticanonical(*lattice) - euler_at_boundary {
                return bad(format!("omega at the maximum is {top}"));
            }
            check_level_positivity(state, &state.hi)?;
        }
        ComponentKind::InteriorSurface { .. } => unreachable!(),
    }
    Ok(())
}

/// Sample points `(t, DH(t))` on a grid of step `1/denominator`.
pub fn dh_samples(slices: &[SliceState], denominator: i64) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for s in slices {
        let mut t = s.lo.clone();
        while t <= s.hi {
            if out.last().is_none_or(|(last, _)| last < &t) {
                out.push((t.clone(), s.omega(&t).square()));
            }
            t += frac(1, denominator);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> LatticeKind {
        LatticeKind::BlowupOfP2(n)
    }

    fn points(level: i64, weights: [i8; 3], n: usize) -> CrossingEvent {
        CrossingEvent::new(level, vec![FixedComponentSpec::point(weights); n])
    }

    #[test]
    fn isolated_minimum_slice() {
        let s = initial_slice(&FixedComponentSpec::minimum_point()).unwrap();
        assert_eq!(s.omega(&q(0)), CohClass::from_ints(k(0), &[3]));
        assert!(s.omega(&q(-3)).is_zero());
        assert_eq!(s.euler, CohClass::from_ints(k(0), &[-1]));
        assert!(matches!(initial_slice(&FixedComponentSpec::maximum_point()), Err(Error::NotAMinimum(_))));
    }

    #[test]
    fn four_manifold_minimum_slice() {
        let min = FixedComponentSpec::extremal_four_manifold(-1, CohClass::from_ints(k(0), &[1]));
        let s = initial_slice(&min).unwrap();
        assert_eq!(s.omega(&q(-1)), CohClass::from_ints(k(0), &[4]));
        assert_eq!(s.omega(&q(0)), CohClass::from_ints(k(0), &[3]));
        assert_eq!(s.omega(&q(3)), CohClass::zero(k(0)));
    }

    #[test]
    fn sphere_minimum_slices() {
        for b in -1..=4 {
            let s = initial_slice(&FixedComponentSpec::extremal_surface(-2, (b, 0))).unwrap();
            assert_eq!(s.euler.square(), q(-b));
            assert_eq!(s.omega(&q(0)), CohClass::anticanonical(s.lattice));
            assert!(s.omega(&q(-2)).square().is_zero());
        }
    }

    #[test]
    fn crossing_index_two_points() {
        let s = initial_slice(&FixedComponentSpec::minimum_point()).unwrap().with_hi(q(-1));
        let t = cross(&s, &points(-1, [-1, 1, 1], 3)).unwrap();
        assert_eq!(t.lattice, k(3));
        assert_eq!(t.euler, CohClass::from_ints(k(3), &[-1, 1, 1, 1]));
        assert_eq!(t.omega(&q(0)), CohClass::anticanonical(k(3)));
        assert!(check_dh_decrease(&s, &t, 3).unwrap());
        let one = cross(&s, &points(-1, [-1, 1, 1], 1)).unwrap();
        assert_eq!(dh_jump(&s, &one).unwrap(), [q(0), q(0), q(1)]);
        assert!(check_dh_decrease(&s, &s.with_hi(q(-1)), 0).is_err());
    }

    #[test]
    fn dh_before_the_blowdown() {
        let s = initial_slice(&FixedComponentSpec::minimum_point()).unwrap().with_hi(q(-1));
        let t = cross(&s, &points(-1, [-1, 1, 1], 3)).unwrap().with_hi(q(1));
        assert_eq!(t.dh(&q(1)).unwrap(), q(4));
        assert_eq!(s.dh(&q(-3)).unwrap(), q(0));
        assert!(matches!(t.dh(&q(2)), Err(Error::OutOfInterval { .. })));
    }

    #[test]
    fn crossing_interior_surface() {
        let s = initial_slice(&FixedComponentSpec::minimum_point()).unwrap().with_hi(q(0));
        let z = FixedComponentSpec::interior_surface(CohClass::from_ints(k(0), &[2]), 0, (2, 2));
        let t = cross(&s, &CrossingEvent::new(0, vec![z])).unwrap();
        assert_eq!(t.euler, CohClass::u(k(0)));
        assert_eq!(t.omega(&q(3)), CohClass::zero(k(0)));
    }

    #[test]
    fn blowdown_of_the_three_lines() {
        let s = initial_slice(&FixedComponentSpec::minimum_point()).unwrap().with_hi(q(-1));
        let t = cross(&s, &points(-1, [-1, 1, 1], 3)).unwrap().with_hi(q(1));
        let mut v = vanishing_classes(&t, 1);
        v.sort();
        assert_eq!(v, vec![vec![1, -1, -1, 0], vec![1, -1, 0, -1], vec![1, 0, -1, -1]]);
        let top = cross(&t, &points(1, [-1, -1, 1], 3)).unwrap();
        assert_eq!(top.lattice, k(0));
        assert_eq!(top.omega(&q(1)), CohClass::from_ints(k(0), &[2]));
        assert_eq!(top.euler, CohClass::u(k(0)));
        let short = cross(&t, &points(1, [-1, -1, 1], 2));
        assert!(matches!(short, Err(Error::VanishingCycleMismatch { expected: 2, found: 3, .. })));
    }

    #[test]
    fn sphere_maximum_degree() {
        let l = k(1);
        let s = SliceState {
            lattice: l,
            anchor_level: q(0),
            anchor: CohClass::anticanonical(l),
            euler: CohClass::from_ints(l, &[1, -1]),
            lo: q(0),
            hi: q(2),
        };
        assert_eq!(bmax_from_euler(&s).unwrap(), (0, q(2)));
        assert!(bmax_from_euler(&s.with_hi(q(1))).is_err());
    }

    #[test]
    fn open_positivity_of_quadratics() {
        // (t+3)^2 - 3(t+1)^2 on (-1, 1)
        let p = [q(6), q(0), q(-2)];
        assert!(positive_on_open(&p, &q(-1), &q(1)));
        assert!(!positive_on_open(&p, &q(-1), &q(2)));
        // t^2 on (-1, 1) vanishes inside
        assert!(!positive_on_open(&[q(0), q(0), q(1)], &q(-1), &q(1)));
        assert!(positive_on_open(&[q(0), q(0), q(1)], &q(0), &q(1)));
    }
}
