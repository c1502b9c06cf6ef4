//! Four-dimensional analogue: semifree actions whose reduced spaces are all
//! spheres. Classes on a reduced space are integer multiples of the point
//! class `u`, and the Duistermaat-Heckman function is the (linear) area.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extremum4 {
    Point,
    /// A fixed sphere; `area` is its symplectic area.
    Sphere { area: i64 },
}

impl Extremum4 {
    pub fn dim(self) -> usize {
        match self {
            Extremum4::Point => 0,
            Extremum4::Sphere { .. } => 2,
        }
    }

    /// Balanced level of the minimum; the maximum sits at the negative.
    pub fn min_level(self) -> i64 {
        match self {
            Extremum4::Point => -2,
            Extremum4::Sphere { .. } => -1,
        }
    }
}

/// Topological fixed point data of a semifree action on a monotone
/// four-manifold: extrema, `k` interior fixed points at level 0, and the
/// Euler class `e(P_min^+)` as a multiple of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tfd4 {
    pub label: Option<String>,
    pub min: Extremum4,
    pub max: Extremum4,
    pub k: usize,
    pub euler_at_min: i64,
}

/// One affine piece of the area function, `area(t) = area_lo - (t - lo) e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice4 {
    pub lo: i64,
    pub hi: i64,
    pub area_lo: i64,
    pub euler: i64,
}

impl Slice4 {
    pub fn area(&self, t: &Rational) -> Rational {
        q(self.area_lo) - (t - q(self.lo)) * q(self.euler)
    }

    pub fn area_hi(&self) -> i64 {
        self.area_lo - (self.hi - self.lo) * self.euler
    }
}

impl Tfd4 {
    pub fn crit(&self) -> Vec<i64> {
        let mut v = vec![self.min.min_level()];
        if self.k > 0 {
            v.push(0);
        }
        v.push(-self.max.min_level());
        v
    }

    pub fn case(&self) -> &'static str {
        match (self.min, self.max) {
            (Extremum4::Point, Extremum4::Point) => "I",
            (Extremum4::Sphere { .. }, Extremum4::Sphere { .. }) => "III",
            _ => "II",
        }
    }

    /// Area function pieces from the minimum to the maximum. A point
    /// minimum has a collapsing Hopf circle bundle, so `e = -u` there.
    pub fn slices(&self) -> Vec<Slice4> {
        let lo = self.min.min_level();
        let hi = -self.max.min_level();
        let area_lo = match self.min {
            Extremum4::Point => 0,
            Extremum4::Sphere { area } => area,
        };
        let first = Slice4 { lo, hi: 0, area_lo, euler: self.euler_at_min };
        let second = Slice4 { lo: 0, hi, area_lo: first.area_hi(), euler: self.euler_at_min + self.k as i64 };
        vec![first, second]
    }

    pub fn euler_at_max(&self) -> i64 {
        self.euler_at_min + self.k as i64
    }

    /// Self-intersection of a sphere extremum, read off the circle bundle
    /// next to it: `e(P_min^+) = n u` and `e(P_max^-) = -n u`.
    pub fn normal_degrees(&self) -> (Option<i64>, Option<i64>) {
        let lo = matches!(self.min, Extremum4::Sphere { .. }).then_some(self.euler_at_min);
        let hi = matches!(self.max, Extremum4::Sphere { .. }).then_some(-self.euler_at_max());
        (lo, hi)
    }

    pub fn betti(&self) -> [i64; 5] {
        let mut b = [0; 5];
        b[0] += 1;
        if self.min.dim() == 2 {
            b[2] += 1;
        }
        b[2] += self.k as i64;
        match self.max {
            Extremum4::Point => b[4] += 1,
            Extremum4::Sphere { .. } => {
                b[2] += 1;
                b[4] += 1;
            }
        }
        b
    }

    /// `(int 1, int c1, int c1^2)` by localization. Fixed points carry
    /// weights `(1, 1)`, `(-1, 1)` or `(-1, -1)`; a sphere with normal degree
    /// `n` and weight `s` contributes `-n x^-2`, `2 s x^-1` and `n + 4`.
    pub fn integrals(&self) -> [Rational; 3] {
        let mut out = [q(0), q(0), q(0)];
        let mut add_point = |w: [i64; 2]| {
            let p = q(w[0] * w[1]);
            let s = q(w[0] + w[1]);
            out[0] += q(1) / &p;
            out[1] += &s / &p;
            out[2] += &s * &s / &p;
        };
        if self.min == Extremum4::Point {
            add_point([1, 1]);
        }
        for _ in 0..self.k {
            add_point([-1, 1]);
        }
        if self.max == Extremum4::Point {
            add_point([-1, -1]);
        }
        let (nlo, nhi) = self.normal_degrees();
        for (n, sign) in [(nlo, 1), (nhi, -1)] {
            if let Some(n) = n {
                out[0] -= q(n);
                out[1] += q(2 * sign);
                out[2] += q(n + 4);
            }
        }
        out
    }

    pub fn c1_squared(&self) -> i64 {
        crate::rational::to_i64(&self.integrals()[2]).expect("integral data")
    }

    pub fn dh_samples(&self, denominator: i64) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let slices = self.slices();
        for (i, s) in slices.iter().enumerate() {
            let first = if i == 0 { s.lo * denominator } else { s.lo * denominator + 1 };
            for n in first..=s.hi * denominator {
                let t = Rational::new(n.into(), denominator.into());
                out.push((t.clone(), s.area(&t)));
            }
        }
        out
    }

    /// Orientation reversal `H -> -H`.
    pub fn flip(&self) -> Tfd4 {
        let top_area = self.slices()[1].area_hi();
        let min = match self.max {
            Extremum4::Point => Extremum4::Point,
            Extremum4::Sphere { .. } => Extremum4::Sphere { area: top_area },
        };
        let max = match self.min {
            Extremum4::Point => Extremum4::Point,
            Extremum4::Sphere { area } => Extremum4::Sphere { area },
        };
        Tfd4 { label: None, min, max, k: self.k, euler_at_min: -self.euler_at_max() }
    }

    /// Flips when needed so the minimum is a point or both extrema are spheres.
    pub fn normalized(&self) -> Tfd4 {
        match (self.min, self.max) {
            (Extremum4::Sphere { .. }, Extremum4::Point) => self.flip(),
            _ => self.clone(),
        }
    }

    /// The full predicate suite. Returns the reason for the first failure.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::AreaContinuityViolation(m));
        let slices = self.slices();
        if self.min == Extremum4::Point && self.euler_at_min != -1 {
            return bad(format!("point minimum needs e = -u, got {}u", self.euler_at_min));
        }
        if let Extremum4::Sphere { area } = self.min {
            if area <= 0 {
                return bad(format!("minimal sphere area {area}"));
            }
        }
        if slices[0].area_hi() != 2 {
            return bad(format!("[omega_0] = {}u, not 2u", slices[0].area_hi()));
        }
        for s in &slices {
            // linear, so positivity on the open interval is an endpoint check
            let (a, b) = (s.area_lo, s.area_hi());
            if a < 0 || b < 0 || (a == 0 && b == 0) {
                return bad(format!("area {a} -> {b} on ({}, {})", s.lo, s.hi));
            }
        }
        let top = slices[1].area_hi();
        match self.max {
            Extremum4::Point => {
                if top != 0 || self.euler_at_max() != 1 {
                    return bad(format!("point maximum needs area 0 and e = u, got {top} and {}u", self.euler_at_max()));
                }
            }
            Extremum4::Sphere { area } => {
                if top <= 0 || area != top {
                    return bad(format!("maximal sphere area {area}, reduced area {top}"));
                }
            }
        }
        let [one, c1, _] = self.integrals();
        if one != q(0) || c1 != q(0) {
            return Err(Error::InconsistentFixedPointData(format!("int 1 = {one}, int c1 = {c1}")));
        }
        Ok(())
    }
}

impl fmt::Display for Tfd4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ext = |e: Extremum4| match e {
            Extremum4::Point => "pt".to_string(),
            Extremum4::Sphere { area } => format!("S2(area {area})"),
        };
        write!(
            f,
            "{} {{ min {}; {} interior pt; max {}; e_min = {}u }}",
            self.label.as_deref().unwrap_or("?"),
            ext(self.min),
            self.k,
            ext(self.max),
            self.euler_at_min
        )
    }
}

/// `(a, b, k)` with `[omega_-1] = a u`, `e(P_-1^+) = b u` and `k` interior
/// points, for two sphere extrema.
pub fn enumerate_case3_tuples() -> BTreeSet<(i64, i64, i64)> {
    let mut out = BTreeSet::new();
    for a in -4..=4i64 {
        for b in -4..=4i64 {
            for k in 0..=4i64 {
                if a > 0 && a - b == 2 && a - 2 * b - k > 0 {
                    out.insert((a, b, k));
                }
            }
        }
    }
    out
}

pub fn flip_tuple((a, b, k): (i64, i64, i64)) -> (i64, i64, i64) {
    (a - 2 * b - k, -(b + k), k)
}

/// One tuple per flip orbit: the one whose minimum has `e <= 0`, then the
/// smallest `|e|`.
pub fn dedupe_case3(tuples: &BTreeSet<(i64, i64, i64)>) -> Result<BTreeSet<(i64, i64, i64)>> {
    let mut out = BTreeSet::new();
    for &t in tuples {
        let f = flip_tuple(t);
        if !tuples.contains(&f) {
            return Err(Error::ClassificationMismatch(format!("flip of {t:?} is {f:?}, not in the tuple set")));
        }
        let key = |&(_, b, _): &(i64, i64, i64)| (b > 0, b.abs());
        out.insert(if key(&f) < key(&t) { f } else { t });
    }
    Ok(out)
}

fn tfd_from_tuple((a, b, k): (i64, i64, i64)) -> Tfd4 {
    let top = a - 2 * b - k;
    Tfd4 {
        label: None,
        min: Extremum4::Sphere { area: a },
        max: Extremum4::Sphere { area: top },
        k: k as usize,
        euler_at_min: b,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GoldenRow4 {
    pub label: &'static str,
    pub manifold: &'static str,
    pub min: Extremum4,
    pub max: Extremum4,
    pub k: usize,
    pub euler_at_min: i64,
    pub b2: i64,
}

impl GoldenRow4 {
    pub fn tfd(&self) -> Tfd4 {
        Tfd4 { label: Some(self.label.into()), min: self.min, max: self.max, k: self.k, euler_at_min: self.euler_at_min }
    }
}

const PT: Extremum4 = Extremum4::Point;
const fn sph(area: i64) -> Extremum4 {
    Extremum4::Sphere { area }
}

pub const GOLDEN4: [GoldenRow4; 8] = [
    GoldenRow4 { label: "I-1", manifold: "P1 x P1", min: PT, max: PT, k: 2, euler_at_min: -1, b2: 2 },
    GoldenRow4 { label: "II-1", manifold: "P2", min: PT, max: sph(3), k: 0, euler_at_min: -1, b2: 1 },
    GoldenRow4 { label: "II-2", manifold: "P2 # P2bar", min: PT, max: sph(2), k: 1, euler_at_min: -1, b2: 2 },
    GoldenRow4 { label: "II-3", manifold: "P2 # 2P2bar", min: PT, max: sph(1), k: 2, euler_at_min: -1, b2: 3 },
    GoldenRow4 { label: "III-1", manifold: "P1 x P1", min: sph(2), max: sph(2), k: 0, euler_at_min: 0, b2: 2 },
    GoldenRow4 { label: "III-2", manifold: "P2 # P2bar", min: sph(1), max: sph(3), k: 0, euler_at_min: -1, b2: 2 },
    GoldenRow4 { label: "III-3", manifold: "P2 # 2P2bar", min: sph(2), max: sph(1), k: 1, euler_at_min: 0, b2: 3 },
    GoldenRow4 { label: "III-4", manifold: "P2 # 3P2bar", min: sph(1), max: sph(1), k: 2, euler_at_min: -1, b2: 4 },
];

/// Interior point counts tried for point minima.
const K_BOX: usize = 6;

/// Every normalized candidate that passes [`Tfd4::check`], unlabeled.
pub fn enumerate4() -> Result<Vec<Tfd4>> {
    let mut out = Vec::new();
    for k in 0..=K_BOX {
        for max in [PT, sph(3 - k as i64)] {
            let t = Tfd4 { label: None, min: PT, max, k, euler_at_min: -1 };
            if t.check().is_ok() {
                out.push(t);
            }
        }
    }
    let tuples = enumerate_case3_tuples();
    for t in dedupe_case3(&tuples)? {
        let t = tfd_from_tuple(t);
        t.check()?;
        out.push(t);
    }
    if let Some(t) = out.iter().find(|t| t.k == K_BOX) {
        return Err(Error::BoundTooSmall { bound: K_BOX as i64, witness: t.to_string() });
    }
    Ok(out)
}

/// The eight rows, labeled and in table order.
pub fn classify4() -> Result<Vec<Tfd4>> {
    let mut found = enumerate4()?;
    let mut rows = Vec::new();
    for g in &GOLDEN4 {
        let want = g.tfd();
        match found.iter().position(|t| Tfd4 { label: want.label.clone(), ..t.clone() } == want) {
            Some(i) => rows.push(Tfd4 { label: want.label.clone(), ..found.swap_remove(i) }),
            None => return Err(Error::ClassificationMismatch(format!("missing {want}"))),
        }
    }
    if !found.is_empty() {
        let extra: Vec<String> = found.iter().map(|t| t.to_string()).collect();
        return Err(Error::ClassificationMismatch(format!("extra: {}", extra.join("; "))));
    }
    Ok(rows)
}

pub fn golden_row4(label: &str) -> Option<&'static GoldenRow4> {
    GOLDEN4.iter().find(|r| r.label == label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_three_tuples_before_and_after_flip() {
        let t = enumerate_case3_tuples();
        let want: BTreeSet<_> = [(1, -1, 0), (1, -1, 1), (1, -1, 2), (2, 0, 0), (2, 0, 1), (3, 1, 0)].into();
        assert_eq!(t, want);
        let d = dedupe_case3(&t).unwrap();
        assert_eq!(d, [(2, 0, 0), (1, -1, 0), (2, 0, 1), (1, -1, 2)].into());
        assert_eq!(flip_tuple((2, 0, 1)), (1, -1, 1));
        assert_eq!(flip_tuple((3, 1, 0)), (1, -1, 0));
    }

    #[test]
    fn point_extrema_force_two_interior_points() {
        let ks: Vec<usize> = enumerate4().unwrap().iter().filter(|t| t.case() == "I").map(|t| t.k).collect();
        assert_eq!(ks, vec![2]);
    }

    #[test]
    fn eight_rows_with_their_invariants() {
        let rows = classify4().unwrap();
        let e: Vec<i64> = rows.iter().map(|t| t.euler_at_min).collect();
        assert_eq!(e, vec![-1, -1, -1, -1, 0, -1, 0, -1]);
        let c: Vec<i64> = rows.iter().map(|t| t.c1_squared()).collect();
        assert_eq!(c, vec![8, 9, 8, 7, 8, 8, 7, 6]);
        for (t, g) in rows.iter().zip(GOLDEN4.iter()) {
            assert_eq!(t.betti()[2], g.b2);
            let b = t.betti();
            assert_eq!(b, [b[4], b[3], b[2], b[1], b[0]]);
        }
    }

    #[test]
    fn flips_stay_in_the_list() {
        let rows = classify4().unwrap();
        let strip = |t: &Tfd4| Tfd4 { label: None, ..t.clone() };
        let all: Vec<Tfd4> = rows.iter().map(strip).collect();
        for t in &rows {
            let f = t.flip();
            assert_eq!(strip(&f.flip()), strip(t));
            assert!(f.check().is_ok(), "{f}");
            let n = f.normalized();
            let equivalent = all.contains(&n) || all.iter().any(|r| r.flip() == n);
            assert!(equivalent, "{t} flips to {n}");
            assert_eq!(f.c1_squared(), t.c1_squared());
        }
    }

    #[test]
    fn area_is_linear_and_continuous() {
        let t = golden_row4("III-4").unwrap().tfd();
        let s = t.dh_samples(2);
        assert_eq!(s.first().unwrap().1, q(1));
        assert_eq!(s.iter().find(|(t, _)| *t == q(0)).unwrap().1, q(2));
        assert_eq!(s.last().unwrap().1, q(1));
    }
}
