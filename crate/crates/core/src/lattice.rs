//! Intersection lattices of the reduced spaces and the classes living in them.
//!
//! A reduced space of a six-dimensional semifree action is either the
//! projective plane blown up at `k <= 8` points (basis `u, E1, .., Ek`) or a
//! product of two spheres (basis `x, y` with `x.y = 1`). Everything here is
//! exact; coefficient vectors are rationals because reduced symplectic
//! classes are rational, but embedded surfaces always have integral duals.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, to_i64, Rational};

pub const MAX_BLOWUPS: usize = 8;

/// Box half-width that provably contains every exceptional class for k <= 8.
/// With `C = au + sum b_i E_i`, Cauchy-Schwarz on `sum b_i = 1 - 3a`,
/// `sum b_i^2 = a^2 + 1` gives `(a - 7)(a + 1) <= 0`, and `a = 7` would force
/// all `b_i = -5/2`. So `-1 <= a <= 6` and `|b_i| <= sqrt(37) < 7`.
const EXCEPTIONAL_COMPLETE_BOUND: i64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeKind {
    BlowupOfP2(usize),
    ProductOfSpheres,
}

impl LatticeKind {
    pub fn rank(self) -> usize {
        match self {
            LatticeKind::BlowupOfP2(k) => k + 1,
            LatticeKind::ProductOfSpheres => 2,
        }
    }

    pub fn gram_entry(self, i: usize, j: usize) -> i64 {
        match self {
            LatticeKind::BlowupOfP2(_) => {
                if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    -1
                }
            }
            LatticeKind::ProductOfSpheres => i64::from(i != j),
        }
    }

    pub fn anticanonical_ints(self) -> Vec<i64> {
        match self {
            LatticeKind::BlowupOfP2(k) => {
                let mut v = vec![-1; k + 1];
                v[0] = 3;
                v
            }
            LatticeKind::ProductOfSpheres => vec![2, 2],
        }
    }

    pub fn pair_ints(self, a: &[i64], b: &[i64]) -> i64 {
        match self {
            LatticeKind::BlowupOfP2(_) => {
                a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
            }
            LatticeKind::ProductOfSpheres => a[0] * b[1] + a[1] * b[0],
        }
    }

    pub fn basis_name(self, i: usize) -> String {
        match self {
            LatticeKind::BlowupOfP2(_) if i == 0 => "u".to_string(),
            LatticeKind::BlowupOfP2(_) => format!("E{i}"),
            LatticeKind::ProductOfSpheres => ["x", "y"][i].to_string(),
        }
    }

    /// Human-readable name of the surface, e.g. `P2#2P2bar`.
    pub fn surface_name(self) -> String {
        match self {
            LatticeKind::BlowupOfP2(0) => "P2".to_string(),
            LatticeKind::BlowupOfP2(1) => "P2#P2bar".to_string(),
            LatticeKind::BlowupOfP2(k) => format!("P2#{k}P2bar"),
            LatticeKind::ProductOfSpheres => "P1xP1".to_string(),
        }
    }

    pub fn blowups(self) -> Option<usize> {
        match self {
            LatticeKind::BlowupOfP2(k) => Some(k),
            LatticeKind::ProductOfSpheres => None,
        }
    }

    fn check(self) -> Result<Self> {
        match self {
            LatticeKind::BlowupOfP2(k) if k > MAX_BLOWUPS => Err(Error::InvalidBlowupCount(k)),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface_name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    kind: LatticeKind,
    gram: Vec<Vec<i64>>,
    anticanonical: CohClass,
}

impl SurfaceLattice {
    pub fn new(kind: LatticeKind) -> Result<Self> {
        let kind = kind.check()?;
        let n = kind.rank();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| kind.gram_entry(i, j)).collect())
            .collect();
        Ok(SurfaceLattice {
            kind,
            gram,
            anticanonical: CohClass::from_ints(kind, &kind.anticanonical_ints()),
        })
    }

    pub fn product_of_spheres() -> Self {
        SurfaceLattice::new(LatticeKind::ProductOfSpheres).expect("always valid")
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn anticanonical(&self) -> &CohClass {
        &self.anticanonical
    }
}

pub fn make_blowup_lattice(k: usize) -> Result<SurfaceLattice> {
    SurfaceLattice::new(LatticeKind::BlowupOfP2(k))
}

/// A cohomology class with exact coefficients in the basis of its lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohClass {
    lattice: LatticeKind,
    coeffs: Vec<Rational>,
}

impl CohClass {
    pub fn new(lattice: LatticeKind, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::RankMismatch { expected: lattice.rank(), got: coeffs.len() });
        }
        Ok(CohClass { lattice, coeffs })
    }

    /// Panics if the length is wrong; meant for literals and internal use.
    pub fn from_ints(lattice: LatticeKind, coeffs: &[i64]) -> Self {
        assert_eq!(coeffs.len(), lattice.rank(), "coefficient count must equal lattice rank");
        CohClass { lattice, coeffs: coeffs.iter().map(|&c| q(c)).collect() }
    }

    pub fn zero(lattice: LatticeKind) -> Self {
        CohClass { lattice, coeffs: vec![Rational::zero(); lattice.rank()] }
    }

    pub fn basis(lattice: LatticeKind, i: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.coeffs[i] = q(1);
        c
    }

    /// The hyperplane class `u` of a blow-up lattice.
    pub fn u(lattice: LatticeKind) -> Self {
        Self::basis(lattice, 0)
    }

    /// The exceptional generator `E_i`, 1-based as in the usual notation.
    pub fn e(lattice: LatticeKind, i: usize) -> Self {
        assert!(i >= 1 && i < lattice.rank(), "E_{i} does not exist in {lattice}");
        Self::basis(lattice, i)
    }

    pub fn anticanonical(lattice: LatticeKind) -> Self {
        Self::from_ints(lattice, &lattice.anticanonical_ints())
    }

    pub fn lattice(&self) -> LatticeKind {
        self.lattice
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(to_i64).collect()
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CohClass { lattice: self.lattice, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pair(&self, other: &CohClass) -> Result<Rational> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(self.lattice.to_string(), other.lattice.to_string()));
        }
        let n = self.lattice.rank();
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                let g = self.lattice.gram_entry(i, j);
                if g != 0 {
                    acc += &self.coeffs[i] * &other.coeffs[j] * q(g);
                }
            }
        }
        Ok(acc)
    }

    /// Pairing for classes already known to share a lattice.
    pub fn dot(&self, other: &CohClass) -> Rational {
        self.pair(other).expect("classes on the same lattice")
    }

    pub fn square(&self) -> Rational {
        self.dot(self)
    }

    /// `c_1 . self`.
    pub fn degree(&self) -> Rational {
        Self::anticanonical(self.lattice).dot(self)
    }
}

pub fn pair(a: &CohClass, b: &CohClass) -> Result<Rational> {
    a.pair(b)
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        assert_eq!(self.lattice, rhs.lattice, "lattice mismatch in addition");
        CohClass {
            lattice: self.lattice,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        assert_eq!(self.lattice, rhs.lattice, "lattice mismatch in subtraction");
        CohClass {
            lattice: self.lattice,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass { lattice: self.lattice, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self.lattice.basis_name(i);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            if mag == q(1) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}{name}", crate::rational::show(&mag))?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Class `a*fiber + b*section` of the odd sphere bundle over a sphere, written
/// in the blow-up basis where the fiber is `u - E1` and the section is `E1`.
pub fn fiber_section_class(fiber: i64, section: i64) -> CohClass {
    CohClass::from_ints(LatticeKind::BlowupOfP2(1), &[fiber, section - fiber])
}

/// Inverse of [`fiber_section_class`].
pub fn to_fiber_section(c: &CohClass) -> Option<(i64, i64)> {
    if c.lattice != LatticeKind::BlowupOfP2(1) {
        return None;
    }
    let v = c.to_ints()?;
    Some((v[0], v[1] + v[0]))
}

/// Calls `f` on every integer vector of length `len` with entries in
/// `[-bound, bound]`, entry sum `sum` and `sq_lo <= sum of squares <= sq_hi`.
pub(crate) fn for_each_vector(
    len: usize,
    bound: i64,
    sum: i64,
    sq_lo: i64,
    sq_hi: i64,
    f: &mut dyn FnMut(&[i64]),
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        buf: &mut Vec<i64>,
        len: usize,
        bound: i64,
        rest: i64,
        sq: i64,
        sq_lo: i64,
        sq_hi: i64,
        f: &mut dyn FnMut(&[i64]),
    ) {
        let slots = (len - buf.len()) as i64;
        let budget = sq_hi - sq;
        if budget < 0 {
            return;
        }
        // |b| <= b^2 and Cauchy-Schwarz both bound what the remaining slots can reach.
        if rest.abs() > slots * bound || rest.abs() > budget || rest * rest > slots * budget {
            return;
        }
        if slots == 0 {
            if sq >= sq_lo {
                f(buf);
            }
            return;
        }
        for b in -bound..=bound {
            buf.push(b);
            go(buf, len, bound, rest - b, sq + b * b, sq_lo, sq_hi, f);
            buf.pop();
        }
    }
    if sq_hi < 0 {
        return;
    }
    go(&mut Vec::with_capacity(len), len, bound, sum, 0, sq_lo, sq_hi, f);
}

/// Integral classes `C` in the box with `C.C = square` and `c_1.C = degree`.
fn classes_with(kind: LatticeKind, bound: i64, square: i64, degree: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    match kind {
        LatticeKind::BlowupOfP2(k) => {
            for a in -bound..=bound {
                let sq = a * a - square;
                let sum = degree - 3 * a;
                for_each_vector(k, bound, sum, sq, sq, &mut |b| {
                    let mut v = Vec::with_capacity(k + 1);
                    v.push(a);
                    v.extend_from_slice(b);
                    out.push(v);
                });
            }
        }
        LatticeKind::ProductOfSpheres => {
            for x in -bound..=bound {
                for y in -bound..=bound {
                    if 2 * x * y == square && 2 * x + 2 * y == degree {
                        out.push(vec![x, y]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The complete set of exceptional classes of `kind`, as integer vectors.
/// Empty for the product of spheres, whose form is even.
pub fn exceptional_set(kind: LatticeKind) -> &'static [Vec<i64>] {
    static CACHE: OnceLock<Vec<Vec<Vec<i64>>>> = OnceLock::new();
    match kind {
        LatticeKind::ProductOfSpheres => &[],
        LatticeKind::BlowupOfP2(k) => {
            let all = CACHE.get_or_init(|| {
                (0..=MAX_BLOWUPS)
                    .map(|k| classes_with(LatticeKind::BlowupOfP2(k), EXCEPTIONAL_COMPLETE_BOUND, -1, 1))
                    .collect()
            });
            &all[k]
        }
    }
}

/// All integral classes with coefficients in `[-bound, bound]` satisfying
/// `C.C = -1` and `c_1.C = 1`.
pub fn exceptional_classes(lattice: &SurfaceLattice, bound: i64) -> Result<Vec<CohClass>> {
    match lattice.kind() {
        LatticeKind::ProductOfSpheres => Err(Error::NoExceptionalBasis(lattice.kind().to_string())),
        kind => Ok(classes_with(kind, bound, -1, 1)
            .into_iter()
            .map(|v| CohClass::from_ints(kind, &v))
            .collect()),
    }
}

/// Genus of a connected embedded symplectic surface in class `c`, if the
/// adjunction formula allows one.
pub fn adjunction_genus(lattice: &SurfaceLattice, c: &CohClass) -> Option<u32> {
    genus_ints(lattice.kind(), &c.to_ints()?)
}

pub(crate) fn genus_ints(kind: LatticeKind, c: &[i64]) -> Option<u32> {
    let twice = kind.pair_ints(c, c) - kind.pair_ints(&kind.anticanonical_ints(), c) + 2;
    if twice < 0 || twice % 2 != 0 {
        None
    } else {
        u32::try_from(twice / 2).ok()
    }
}

/// Li positivity: a surface of non-negative self-intersection meets every
/// exceptional class non-negatively.
pub(crate) fn li_positive(kind: LatticeKind, c: &[i64]) -> bool {
    kind.pair_ints(c, c) < 0 || exceptional_set(kind).iter().all(|e| kind.pair_ints(c, e) >= 0)
}

/// Every way to write `total` as a multiset of pairwise orthogonal classes,
/// each of positive degree with a valid adjunction genus and obeying Li
/// positivity. Each splitting is sorted; the list is sorted.
pub fn component_splittings(
    lattice: &SurfaceLattice,
    total: &CohClass,
    bound: i64,
) -> Vec<Vec<(CohClass, u32)>> {
    let kind = lattice.kind();
    let Some(t) = total.to_ints() else { return Vec::new() };
    splittings_ints(kind, &t, bound)
        .into_iter()
        .map(|parts| {
            parts
                .into_iter()
                .map(|(c, g)| (CohClass::from_ints(kind, &c), g))
                .collect()
        })
        .collect()
}

pub(crate) fn splittings_ints(
    kind: LatticeKind,
    total: &[i64],
    bound: i64,
) -> Vec<Vec<(Vec<i64>, u32)>> {
    let c1 = kind.anticanonical_ints();
    let volume = kind.pair_ints(&c1, total);
    if volume < 1 {
        return Vec::new();
    }
    // A part C is orthogonal to all the other parts, so C.total = C.C.
    let mut parts: Vec<(Vec<i64>, u32)> = Vec::new();
    for degree in 1..=volume {
        let mut consider = |c: &[i64]| {
            if kind.pair_ints(c, total) != kind.pair_ints(c, c) {
                return;
            }
            if let Some(g) = genus_ints(kind, c) {
                if li_positive(kind, c) {
                    parts.push((c.to_vec(), g));
                }
            }
        };
        match kind {
            LatticeKind::BlowupOfP2(k) => {
                for a in -bound..=bound {
                    // adjunction: C.C >= degree - 2
                    let sq_hi = a * a - (degree - 2);
                    for_each_vector(k, bound, degree - 3 * a, 0, sq_hi, &mut |b| {
                        let mut v = Vec::with_capacity(k + 1);
                        v.push(a);
                        v.extend_from_slice(b);
                        consider(&v);
                    });
                }
            }
            LatticeKind::ProductOfSpheres => {
                for x in -bound..=bound {
                    let y2 = degree - 2 * x;
                    if y2 % 2 == 0 && (y2 / 2).abs() <= bound {
                        consider(&[x, y2 / 2]);
                    }
                }
            }
        }
    }
    parts.sort();

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rest = total.to_vec();
    fn go(
        kind: LatticeKind,
        parts: &[(Vec<i64>, u32)],
        start: usize,
        chosen: &mut Vec<usize>,
        rest: &mut Vec<i64>,
        out: &mut Vec<Vec<(Vec<i64>, u32)>>,
    ) {
        if rest.iter().all(|&x| x == 0) {
            if !chosen.is_empty() {
                out.push(chosen.iter().map(|&i| parts[i].clone()).collect());
            }
            return;
        }
        let c1 = kind.anticanonical_ints();
        let rest_volume = kind.pair_ints(&c1, rest);
        for i in start..parts.len() {
            let (c, _) = &parts[i];
            if kind.pair_ints(&c1, c) > rest_volume {
                continue;
            }
            if chosen.iter().any(|&j| kind.pair_ints(&parts[j].0, c) != 0) {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(c) {
                *r -= x;
            }
            chosen.push(i);
            go(kind, parts, i, chosen, rest, out);
            chosen.pop();
            for (r, x) in rest.iter_mut().zip(c) {
                *r += x;
            }
        }
    }
    go(kind, &parts, 0, &mut chosen, &mut rest, &mut out);
    out
}

/// A linear map between lattices, as an integer matrix acting on coefficient
/// vectors (`target = matrix * source`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub source: LatticeKind,
    pub target: LatticeKind,
    pub matrix: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn apply(&self, c: &CohClass) -> Result<CohClass> {
        if c.lattice != self.source {
            return Err(Error::LatticeMismatch(c.lattice.to_string(), self.source.to_string()));
        }
        let coeffs = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&c.coeffs)
                    .filter(|(m, _)| **m != 0)
                    .map(|(m, x)| x * q(*m))
                    .sum()
            })
            .collect();
        CohClass::new(self.target, coeffs)
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum()).collect()
    }
}

/// An isometry `source -> target` fixing `c_1` and sending each `from` class
/// to its `to` class, if there is one. The identity wins when it qualifies;
/// otherwise the images of `E1, .., Ek` are searched among the exceptional
/// classes of `target`, pruned by the pairings the isometry has to preserve.
pub fn find_isometry(source: LatticeKind, target: LatticeKind, pairs: &[(CohClass, CohClass)]) -> Option<LatticeMap> {
    let fits = |m: &LatticeMap| pairs.iter().all(|(a, b)| m.apply(a).ok().as_ref() == Some(b));
    let n = source.rank();
    let identity = || (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let candidate = |matrix| LatticeMap { source, target, matrix };
    match (source, target) {
        (LatticeKind::ProductOfSpheres, LatticeKind::ProductOfSpheres) => {
            [identity(), vec![vec![0, 1], vec![1, 0]]].into_iter().map(candidate).find(fits)
        }
        (LatticeKind::BlowupOfP2(k), LatticeKind::BlowupOfP2(l)) if k == l => {
            let id = candidate(identity());
            if fits(&id) {
                return Some(id);
            }
            let exc = exceptional_set(target);
            // pairings every image of E_i must reproduce
            let wanted: Vec<Vec<(Rational, &CohClass)>> = (1..=k)
                .map(|i| pairs.iter().map(|(a, b)| (CohClass::e(source, i).dot(a), b)).collect())
                .collect();
            let mut chosen: Vec<&Vec<i64>> = Vec::with_capacity(k);
            let mut found = None;
            isometry_search(target, exc, &wanted, &mut chosen, &mut |images| {
                let c1 = target.anticanonical_ints();
                let sum: Vec<i64> = (0..n).map(|r| c1[r] + images.iter().map(|e| e[r]).sum::<i64>()).collect();
                if sum.iter().any(|x| x % 3 != 0) {
                    return false;
                }
                let u: Vec<i64> = sum.iter().map(|x| x / 3).collect();
                let columns: Vec<&Vec<i64>> = std::iter::once(&u).chain(images.iter().copied()).collect();
                let m = candidate((0..n).map(|r| columns.iter().map(|c| c[r]).collect()).collect());
                if fits(&m) {
                    found = Some(m);
                    true
                } else {
                    false
                }
            });
            found
        }
        _ => None,
    }
}

fn isometry_search<'a>(
    target: LatticeKind,
    exc: &'a [Vec<i64>],
    wanted: &[Vec<(Rational, &CohClass)>],
    chosen: &mut Vec<&'a Vec<i64>>,
    done: &mut dyn FnMut(&[&'a Vec<i64>]) -> bool,
) -> bool {
    let i = chosen.len();
    if i == wanted.len() {
        return done(chosen);
    }
    for e in exc {
        if chosen.iter().any(|c| *c == e || target.pair_ints(c, e) != 0) {
            continue;
        }
        let ce = CohClass::from_ints(target, e);
        if wanted[i].iter().any(|(p, b)| &ce.dot(b) != p) {
            continue;
        }
        chosen.push(e);
        if isometry_search(target, exc, wanted, chosen, done) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Inclusion of `source` into its blow-up at `extra` further points: old
/// coordinates are kept and the new exceptional classes get coefficient 0.
/// A product of spheres blown up once is presented as `P2#2P2bar` via
/// `x -> u - E1`, `y -> u - E2`, new exceptional class `u - E1 - E2`.
pub fn blow_up_embedding(source: LatticeKind, extra: usize) -> Result<LatticeMap> {
    match source {
        LatticeKind::BlowupOfP2(k) => {
            let target = LatticeKind::BlowupOfP2(k + extra).check()?;
            let matrix = (0..target.rank())
                .map(|i| (0..source.rank()).map(|j| i64::from(i == j)).collect())
                .collect();
            Ok(LatticeMap { source, target, matrix })
        }
        LatticeKind::ProductOfSpheres => {
            if extra == 0 {
                return Ok(LatticeMap { source, target: source, matrix: vec![vec![1, 0], vec![0, 1]] });
            }
            let target = LatticeKind::BlowupOfP2(1 + extra).check()?;
            let mut matrix = vec![vec![0, 0]; target.rank()];
            matrix[0] = vec![1, 1];
            matrix[1] = vec![-1, 0];
            matrix[2] = vec![0, -1];
            Ok(LatticeMap { source, target, matrix })
        }
    }
}

/// The class `E` that a blow-up embedding of a product of spheres creates
/// first; for ordinary blow-ups the new classes are just `E_{k+1}, ...`.
pub fn new_exceptional_classes(map: &LatticeMap, extra: usize) -> Vec<CohClass> {
    let t = map.target;
    match map.source {
        LatticeKind::BlowupOfP2(k) => (k + 1..=k + extra).map(|i| CohClass::e(t, i)).collect(),
        LatticeKind::ProductOfSpheres => {
            let mut v = vec![CohClass::from_ints(t, &{
                let mut c = vec![0; t.rank()];
                c[0] = 1;
                c[1] = -1;
                c[2] = -1;
                c
            })];
            v.extend((3..=1 + extra).map(|i| CohClass::e(t, i)));
            v
        }
    }
}

/// Blows down the given pairwise orthogonal exceptional classes and returns
/// the projection onto their orthogonal complement, written in a standard
/// basis of the complement.
pub fn blow_down(source: LatticeKind, classes: &[Vec<i64>]) -> Result<LatticeMap> {
    let exc = exceptional_set(source);
    for (i, c) in classes.iter().enumerate() {
        if !exc.contains(c) {
            return Err(Error::AreaContinuityViolation(format!(
                "{} is not an exceptional class of {source}",
                CohClass::from_ints(source, c)
            )));
        }
        for d in &classes[i + 1..] {
            if source.pair_ints(c, d) != 0 {
                return Err(Error::NonDisjointBlowdown(format!(
                    "{} . {} = {}",
                    CohClass::from_ints(source, c),
                    CohClass::from_ints(source, d),
                    source.pair_ints(c, d)
                )));
            }
        }
    }
    let n = source.rank();
    let rank = n - classes.len();
    let mut c1 = source.anticanonical_ints();
    for c in classes {
        for (a, b) in c1.iter_mut().zip(c) {
            *a += b;
        }
    }
    let orthogonal = |v: &[i64]| classes.iter().all(|c| source.pair_ints(v, c) == 0);
    // row of the form x -> (b . x)
    let dual_row = |b: &[i64], sign: i64| -> Vec<i64> {
        (0..n)
            .map(|j| sign * (0..n).map(|i| b[i] * source.gram_entry(i, j)).sum::<i64>())
            .collect()
    };

    if rank == 1 {
        if c1.iter().any(|x| x % 3 != 0) {
            return Err(Error::UnidentifiedLattice(format!(
                "complement of rank 1 with c1 = {} not divisible by 3",
                CohClass::from_ints(source, &c1)
            )));
        }
        let u: Vec<i64> = c1.iter().map(|x| x / 3).collect();
        if source.pair_ints(&u, &u) != 1 {
            return Err(Error::UnidentifiedLattice("rank 1 complement is not the plane".into()));
        }
        return Ok(LatticeMap { source, target: LatticeKind::BlowupOfP2(0), matrix: vec![dual_row(&u, 1)] });
    }

    let candidates: Vec<&Vec<i64>> = exc.iter().filter(|e| orthogonal(e)).collect();
    if let Some(basis) = find_exceptional_basis(source, &candidates, rank - 1, &c1) {
        let (u, es) = basis;
        let mut matrix = vec![dual_row(&u, 1)];
        for e in &es {
            matrix.push(dual_row(e, -1));
        }
        return Ok(LatticeMap { source, target: LatticeKind::BlowupOfP2(rank - 1), matrix });
    }

    if rank == 2 {
        // Even complement: look for x, y of square 0 with x.y = 1 and 2x + 2y = c1.
        if c1.iter().all(|x| x % 2 == 0) {
            for x in classes_with(source, 11, 0, 2) {
                if !orthogonal(&x) {
                    continue;
                }
                let y: Vec<i64> = c1.iter().zip(&x).map(|(c, a)| c / 2 - a).collect();
                if source.pair_ints(&y, &y) == 0 && source.pair_ints(&x, &y) == 1 {
                    // coordinates: x-coefficient is (y . v), y-coefficient is (x . v)
                    let matrix = vec![dual_row(&y, 1), dual_row(&x, 1)];
                    return Ok(LatticeMap { source, target: LatticeKind::ProductOfSpheres, matrix });
                }
            }
        }
    }
    Err(Error::UnidentifiedLattice(format!(
        "complement of rank {rank} in {source} has no standard basis"
    )))
}

/// A maximal set of `size` pairwise orthogonal exceptional classes `E'` for
/// which `u' = (c1 + sum E')/3` is integral with `u'.u' = 1`.
fn find_exceptional_basis(
    kind: LatticeKind,
    candidates: &[&Vec<i64>],
    size: usize,
    c1: &[i64],
) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    fn go(
        kind: LatticeKind,
        candidates: &[&Vec<i64>],
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        c1: &[i64],
    ) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
        if chosen.len() == size {
            let mut s = c1.to_vec();
            for &i in chosen.iter() {
                for (a, b) in s.iter_mut().zip(candidates[i].iter()) {
                    *a += b;
                }
            }
            if s.iter().any(|x| x % 3 != 0) {
                return None;
            }
            let u: Vec<i64> = s.iter().map(|x| x / 3).collect();
            if kind.pair_ints(&u, &u) != 1 {
                return None;
            }
            return Some((u, chosen.iter().map(|&i| candidates[i].clone()).collect()));
        }
        for i in start..candidates.len() {
            if chosen.iter().any(|&j| kind.pair_ints(candidates[i], candidates[j]) != 0) {
                continue;
            }
            chosen.push(i);
            if let Some(found) = go(kind, candidates, size, i + 1, chosen, c1) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
    // Prefer the plain generators E_i so that untouched coordinates keep their names.
    let mut ordered: Vec<&Vec<i64>> = candidates.to_vec();
    ordered.sort_by_key(|v| (v[0], v.iter().map(|x| x.abs()).sum::<i64>(), std::cmp::Reverse((*v).clone())));
    go(kind, &ordered, size, 0, &mut Vec::new(), c1)
}
