//! Fixed components and their localization summands.
//!
//! Every integral we need is `int_M alpha` for `alpha` one of `1`, `c_1` and
//! `c_1^3` of the equivariant tangent bundle. Localization writes it as a sum
//! over fixed components of `int_F alpha|_F / e(nu_F)`; the result is a
//! Laurent polynomial in `x` whose negative part must cancel.

use serde::{Deserialize, Serialize};

use crate::classifier6::Tfd;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lattice::{CohClass, LatticeKind};
use crate::rational::{q, to_i64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Integrand {
    One,
    C1,
    C1Cubed,
}

impl Integrand {
    fn power(self) -> u32 {
        match self {
            Integrand::One => 0,
            Integrand::C1 => 1,
            Integrand::C1Cubed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// Weights of the isotropy representation, each +1 or -1.
    IsolatedPoint { weights: [i8; 3] },
    /// A surface at an interior level. `normal_degrees = (b+, b-)` are the
    /// Chern numbers of the normal line bundles of weight +1 and -1.
    InteriorSurface { class: CohClass, genus: u32, normal_degrees: (i64, i64) },
    /// A sphere extremum with normal Chern numbers `(d1, d2)`.
    ExtremalSurface { normal_degrees: (i64, i64) },
    /// A four-dimensional extremum, with the Euler class of the circle bundle
    /// on the adjacent level set (`e(P^-)` at a maximum, `e(P^+)` at a minimum).
    ExtremalFourManifold { lattice: LatticeKind, euler_at_boundary: CohClass },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponentSpec {
    pub level: i64,
    pub kind: ComponentKind,
}

impl FixedComponentSpec {
    pub fn point(weights: [i8; 3]) -> Self {
        let level = -weights.iter().map(|&w| i64::from(w)).sum::<i64>();
        FixedComponentSpec { level, kind: ComponentKind::IsolatedPoint { weights } }
    }

    pub fn minimum_point() -> Self {
        Self::point([1, 1, 1])
    }

    pub fn maximum_point() -> Self {
        Self::point([-1, -1, -1])
    }

    pub fn interior_surface(class: CohClass, genus: u32, normal_degrees: (i64, i64)) -> Self {
        FixedComponentSpec { level: 0, kind: ComponentKind::InteriorSurface { class, genus, normal_degrees } }
    }

    pub fn extremal_surface(level: i64, normal_degrees: (i64, i64)) -> Self {
        FixedComponentSpec { level, kind: ComponentKind::ExtremalSurface { normal_degrees } }
    }

    pub fn extremal_four_manifold(level: i64, euler_at_boundary: CohClass) -> Self {
        FixedComponentSpec {
            level,
            kind: ComponentKind::ExtremalFourManifold { lattice: euler_at_boundary.lattice(), euler_at_boundary },
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ComponentKind::IsolatedPoint { .. } => 0,
            ComponentKind::InteriorSurface { .. } | ComponentKind::ExtremalSurface { .. } => 2,
            ComponentKind::ExtremalFourManifold { .. } => 4,
        }
    }

    /// Morse index of the moment map at the component.
    pub fn index(&self) -> usize {
        match &self.kind {
            ComponentKind::IsolatedPoint { weights } => 2 * weights.iter().filter(|&&w| w < 0).count(),
            ComponentKind::InteriorSurface { .. } => 2,
            ComponentKind::ExtremalSurface { .. } | ComponentKind::ExtremalFourManifold { .. } => {
                if self.level > 0 {
                    6 - self.dim()
                } else {
                    0
                }
            }
        }
    }

    pub fn is_minimum(&self) -> bool {
        match &self.kind {
            ComponentKind::InteriorSurface { .. } => false,
            _ => self.index() == 0,
        }
    }

    pub fn is_maximum(&self) -> bool {
        match &self.kind {
            ComponentKind::InteriorSurface { .. } => false,
            _ => self.index() + self.dim() == 6,
        }
    }

    /// Poincare polynomial coefficients of the component itself.
    pub fn poincare(&self) -> Vec<i64> {
        match &self.kind {
            ComponentKind::IsolatedPoint { .. } => vec![1],
            ComponentKind::InteriorSurface { genus, .. } => vec![1, 2 * i64::from(*genus), 1],
            ComponentKind::ExtremalSurface { .. } => vec![1, 0, 1],
            ComponentKind::ExtremalFourManifold { lattice, .. } => vec![1, 0, lattice.rank() as i64, 0, 1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFixedComponent(m));
        match &self.kind {
            ComponentKind::IsolatedPoint { weights } => {
                if weights.iter().any(|&w| w != 1 && w != -1) {
                    return bad(format!("weights {weights:?} are not all +-1"));
                }
                let sum: i64 = weights.iter().map(|&w| i64::from(w)).sum();
                if self.level != -sum {
                    return bad(format!("point at level {} has weight sum {sum}", self.level));
                }
            }
            ComponentKind::InteriorSurface { class, normal_degrees: (bp, bm), .. } => {
                if self.level != 0 {
                    return bad(format!("interior surface at level {}", self.level));
                }
                if !class.is_integral() {
                    return bad(format!("surface class {class} is not integral"));
                }
                if q(bp + bm) != class.square() {
                    return bad(format!("b+ + b- = {} but [Z].[Z] = {}", bp + bm, class.square()));
                }
            }
            ComponentKind::ExtremalSurface { .. } => {
                if self.level.abs() != 2 {
                    return bad(format!("extremal sphere at level {}", self.level));
                }
            }
            ComponentKind::ExtremalFourManifold { lattice, euler_at_boundary } => {
                if self.level.abs() != 1 {
                    return bad(format!("four-dimensional extremum at level {}", self.level));
                }
                if euler_at_boundary.lattice() != *lattice || !euler_at_boundary.is_integral() {
                    return bad(format!("euler class {euler_at_boundary} does not live on {lattice}"));
                }
            }
        }
        Ok(())
    }

    /// The summand of `int_M alpha` contributed by this component.
    pub fn contribution(&self, alpha: Integrand) -> Result<LaurentPoly> {
        self.validate()?;
        let n = alpha.power();
        match &self.kind {
            ComponentKind::IsolatedPoint { weights } => {
                let sum: i64 = weights.iter().map(|&w| i64::from(w)).sum();
                let prod: i64 = weights.iter().map(|&w| i64::from(w)).product();
                let c = q(sum.pow(n)) / q(prod);
                Ok(LaurentPoly::monomial(n as i32 - 3, c))
            }
            ComponentKind::InteriorSurface { genus, normal_degrees: (bp, bm), .. } => {
                let euler = &QLinear::linear(1, *bp) * &QLinear::linear(-1, *bm);
                let c1 = QLinear::linear(0, 2 - 2 * i64::from(*genus) + bp + bm);
                Ok((&c1.pow(n) * &euler.inverse()?).integrate())
            }
            ComponentKind::ExtremalSurface { normal_degrees: (d1, d2) } => {
                let w = if self.level > 0 { -1 } else { 1 };
                let euler = &QLinear::linear(w, *d1) * &QLinear::linear(w, *d2);
                let c1 = QLinear::linear(2 * w, 2 + d1 + d2);
                Ok((&c1.pow(n) * &euler.inverse()?).integrate())
            }
            ComponentKind::ExtremalFourManifold { lattice, euler_at_boundary } => {
                let (w, normal) = if self.level > 0 {
                    (-1, -euler_at_boundary)
                } else {
                    (1, euler_at_boundary.clone())
                };
                let x = SurfaceSeries::x(*lattice, w);
                let nu = SurfaceSeries::class(&normal);
                let euler = &x + &nu;
                let c1 = &(&SurfaceSeries::class(&CohClass::anticanonical(*lattice)) + &nu) + &x;
                Ok((&c1.pow(n) * &euler.inverse()?).integrate())
            }
        }
    }
}

/// `a + b q` with `q^2 = 0`, where `q` is the fundamental class of a surface.
#[derive(Clone, Debug)]
struct QLinear {
    a: LaurentPoly,
    b: LaurentPoly,
}

impl QLinear {
    /// `w x + d q`.
    fn linear(w: i64, d: i64) -> Self {
        QLinear { a: LaurentPoly::x(q(w)), b: LaurentPoly::constant(q(d)) }
    }

    fn one() -> Self {
        QLinear { a: LaurentPoly::constant(q(1)), b: LaurentPoly::zero() }
    }

    fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `(a + b q)^-1 = a^-1 - b a^-2 q`, defined when `a` is a monomial.
    fn inverse(&self) -> Result<Self> {
        let inv = self.a.monomial_inverse().ok_or_else(|| {
            Error::InternalArithmeticError(format!("cannot invert {} + ({})q", self.a, self.b))
        })?;
        let b = -&(&self.b * &(&inv * &inv));
        Ok(QLinear { a: inv, b })
    }

    fn integrate(&self) -> LaurentPoly {
        self.b.clone()
    }
}

impl std::ops::Mul for &QLinear {
    type Output = QLinear;
    fn mul(self, rhs: &QLinear) -> QLinear {
        QLinear { a: &self.a * &rhs.a, b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a) }
    }
}

/// An element of `H^*(F) [x, x^-1]` for a four-manifold `F`, split by degree:
/// `d0 + sum_i d2[i] e_i + d4 [pt]`, each part a Laurent polynomial in `x`.
#[derive(Clone, Debug)]
struct SurfaceSeries {
    lattice: LatticeKind,
    d0: LaurentPoly,
    d2: Vec<LaurentPoly>,
    d4: LaurentPoly,
}

impl SurfaceSeries {
    fn zero(lattice: LatticeKind) -> Self {
        SurfaceSeries {
            lattice,
            d0: LaurentPoly::zero(),
            d2: vec![LaurentPoly::zero(); lattice.rank()],
            d4: LaurentPoly::zero(),
        }
    }

    fn scalar(lattice: LatticeKind, p: LaurentPoly) -> Self {
        let mut s = Self::zero(lattice);
        s.d0 = p;
        s
    }

    fn x(lattice: LatticeKind, w: i64) -> Self {
        Self::scalar(lattice, LaurentPoly::x(q(w)))
    }

    fn class(c: &CohClass) -> Self {
        let mut s = Self::zero(c.lattice());
        s.d2 = c.coeffs().iter().map(|r| LaurentPoly::constant(r.clone())).collect();
        s
    }

    fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::scalar(self.lattice, LaurentPoly::constant(q(1))), |acc, _| &acc * self)
    }

    /// With `d0 = m` a monomial, `self = m (1 + n)` where `n` is nilpotent of
    /// order 3, so the inverse is `m^-1 (1 - n + n^2)` exactly.
    fn inverse(&self) -> Result<Self> {
        let inv = self.d0.monomial_inverse().ok_or_else(|| {
            Error::InternalArithmeticError(format!("degree-0 part {} is not a monomial", self.d0))
        })?;
        let minv = Self::scalar(self.lattice, inv);
        let mut n = self.clone();
        n.d0 = LaurentPoly::zero();
        let n = &n * &minv;
        let one = Self::scalar(self.lattice, LaurentPoly::constant(q(1)));
        let series = &(&one + &(-&n)) + &(&n * &n);
        Ok(&series * &minv)
    }

    fn integrate(&self) -> LaurentPoly {
        self.d4.clone()
    }
}

impl std::ops::Add for &SurfaceSeries {
    type Output = SurfaceSeries;
    fn add(self, rhs: &SurfaceSeries) -> SurfaceSeries {
        SurfaceSeries {
            lattice: self.lattice,
            d0: &self.d0 + &rhs.d0,
            d2: self.d2.iter().zip(&rhs.d2).map(|(a, b)| a + b).collect(),
            d4: &self.d4 + &rhs.d4,
        }
    }
}

impl std::ops::Neg for &SurfaceSeries {
    type Output = SurfaceSeries;
    fn neg(self) -> SurfaceSeries {
        SurfaceSeries {
            lattice: self.lattice,
            d0: -&self.d0,
            d2: self.d2.iter().map(|a| -a).collect(),
            d4: -&self.d4,
        }
    }
}

impl std::ops::Mul for &SurfaceSeries {
    type Output = SurfaceSeries;
    fn mul(self, rhs: &SurfaceSeries) -> SurfaceSeries {
        let n = self.lattice.rank();
        let mut d4 = &(&self.d0 * &rhs.d4) + &(&self.d4 * &rhs.d0);
        for i in 0..n {
            for j in 0..n {
                let g = self.lattice.gram_entry(i, j);
                if g != 0 {
                    d4 = &d4 + &(&self.d2[i] * &rhs.d2[j]).scale(&q(g));
                }
            }
        }
        SurfaceSeries {
            lattice: self.lattice,
            d0: &self.d0 * &rhs.d0,
            d2: (0..n).map(|i| &(&self.d0 * &rhs.d2[i]) + &(&self.d2[i] * &rhs.d0)).collect(),
            d4,
        }
    }
}

/// Sum of the contributions of `components`.
pub fn integrate_components(components: &[FixedComponentSpec], alpha: Integrand) -> Result<LaurentPoly> {
    components.iter().try_fold(LaurentPoly::zero(), |acc, c| Ok(&acc + &c.contribution(alpha)?))
}

pub fn integrate(tfd: &Tfd, alpha: Integrand) -> Result<LaurentPoly> {
    integrate_components(&tfd.components().cloned().collect::<Vec<_>>(), alpha)
}

/// `<c_1^3, [M]>`, after checking that `int 1` and `int c_1` vanish.
pub fn chern_number_of(components: &[FixedComponentSpec]) -> Result<i64> {
    for alpha in [Integrand::One, Integrand::C1] {
        let p = integrate_components(components, alpha)?;
        if !p.is_zero() {
            return Err(Error::InconsistentFixedPointData(format!("int {alpha:?} = {p}")));
        }
    }
    let p = integrate_components(components, Integrand::C1Cubed)?;
    if let Some((d, c)) = p.terms().find(|(d, _)| *d != 0) {
        return Err(Error::InconsistentFixedPointData(format!(
            "int c1^3 has a nonzero x^{d} coefficient {c}"
        )));
    }
    let c: Rational = p.coefficient(0);
    to_i64(&c).ok_or_else(|| Error::InternalArithmeticError(format!("c1^3 = {c} is not an integer")))
}

pub fn chern_number(tfd: &Tfd) -> Result<i64> {
    chern_number_of(&tfd.components().cloned().collect::<Vec<_>>())
}

/// Betti numbers from the perfect Morse-Bott moment map.
pub fn betti_of<'a>(components: impl IntoIterator<Item = &'a FixedComponentSpec>) -> [i64; 7] {
    let mut b = [0i64; 7];
    for c in components {
        for (i, p) in c.poincare().iter().enumerate() {
            if let Some(slot) = b.get_mut(c.index() + i) {
                *slot += p;
            }
        }
    }
    b
}

pub fn betti(tfd: &Tfd) -> [i64; 7] {
    betti_of(tfd.components())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> LatticeKind {
        LatticeKind::BlowupOfP2(n)
    }

    #[test]
    fn point_contributions() {
        let min = FixedComponentSpec::minimum_point();
        assert_eq!(min.level, -3);
        assert_eq!(min.contribution(Integrand::C1Cubed).unwrap(), LaurentPoly::constant(q(27)));
        let p = FixedComponentSpec::point([-1, 1, 1]);
        assert_eq!(p.level, -1);
        assert_eq!(p.contribution(Integrand::One).unwrap(), LaurentPoly::monomial(-3, q(-1)));
        let bad = FixedComponentSpec { level: 0, kind: ComponentKind::IsolatedPoint { weights: [1, 1, 1] } };
        assert!(matches!(bad.contribution(Integrand::One), Err(Error::InvalidFixedComponent(_))));
    }

    #[test]
    fn interior_surface_contributions() {
        // 2u in the plane, e- = -u, e+ = u: b+ = 2, b- = 2
        let z = FixedComponentSpec::interior_surface(CohClass::from_ints(k(0), &[2]), 0, (2, 2));
        assert_eq!(z.contribution(Integrand::C1).unwrap(), LaurentPoly::monomial(-2, q(-6)));
        assert!(z.contribution(Integrand::C1Cubed).unwrap().is_zero());
        assert!(z.contribution(Integrand::One).unwrap().is_zero());
        let wrong = FixedComponentSpec::interior_surface(CohClass::from_ints(k(0), &[2]), 0, (1, 1));
        assert!(wrong.validate().is_err());
    }

    #[test]
    fn four_manifold_maximum_of_the_plane() {
        let e = CohClass::from_ints(k(0), &[-1]);
        let f = FixedComponentSpec::extremal_four_manifold(1, e);
        let p = f.contribution(Integrand::C1Cubed).unwrap();
        assert_eq!(p.coefficient(0), q(37));
        let total = &p + &FixedComponentSpec::minimum_point().contribution(Integrand::C1Cubed).unwrap();
        assert_eq!(total, LaurentPoly::constant(q(64)));
    }

    #[test]
    fn four_manifold_minimum_mirrors_the_maximum() {
        // the orientation-reversed projective space: P2 minimum at -1, point maximum at 3
        let comps = [
            FixedComponentSpec::extremal_four_manifold(-1, CohClass::from_ints(k(0), &[1])),
            FixedComponentSpec::maximum_point(),
        ];
        assert_eq!(chern_number_of(&comps).unwrap(), 64);
    }

    #[test]
    fn sphere_maximum_closed_form() {
        // point min, one index-2 point, interior sphere (zero c1^3), sphere max of degree d
        for d in -4..=4 {
            let comps = [
                FixedComponentSpec::minimum_point(),
                FixedComponentSpec::point([-1, 1, 1]),
                FixedComponentSpec::extremal_surface(2, (d, 0)),
            ];
            let p = integrate_components(&comps, Integrand::C1Cubed).unwrap();
            assert_eq!(p.coefficient(0), q(50 + 4 * d), "d = {d}");
            let split = FixedComponentSpec::extremal_surface(2, (d - 3, 3));
            assert_eq!(
                split.contribution(Integrand::C1Cubed).unwrap(),
                FixedComponentSpec::extremal_surface(2, (d, 0)).contribution(Integrand::C1Cubed).unwrap()
            );
        }
    }

    #[test]
    fn betti_of_plane_times_nothing() {
        let comps = [
            FixedComponentSpec::minimum_point(),
            FixedComponentSpec::interior_surface(CohClass::from_ints(k(0), &[3]), 1, (3, 6)),
            FixedComponentSpec::extremal_four_manifold(1, CohClass::from_ints(k(0), &[2])),
        ];
        assert_eq!(betti_of(&comps), [1, 0, 2, 2, 2, 0, 1]);
    }
}
