use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{adjunction_genus, find_isometry, li_positive, CohClass, LatticeKind, SurfaceLattice};
use crate::localization::{betti_of, chern_number_of, ComponentKind, FixedComponentSpec};
use crate::rational::{q, to_i64, Rational};
use crate::reduction::{
    bmax_from_euler, check_dh_decrease, check_level_positivity, check_maximum, check_open_positivity,
    cross, crossing_type, initial_slice, sweep, CrossingEvent, CrossingType, SliceState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MaxKind {
    Point,
    Sphere,
    FourManifold,
}

impl MaxKind {
    pub const ALL: [MaxKind; 3] = [MaxKind::Point, MaxKind::Sphere, MaxKind::FourManifold];

    pub fn level(self) -> i64 {
        match self {
            MaxKind::Point => 3,
            MaxKind::Sphere => 2,
            MaxKind::FourManifold => 1,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            MaxKind::Point => 0,
            MaxKind::Sphere => 2,
            MaxKind::FourManifold => 4,
        }
    }

    pub fn from_dim(dim: usize) -> Option<MaxKind> {
        MaxKind::ALL.into_iter().find(|m| m.dim() == dim)
    }

    /// Roman numeral of the case.
    pub fn case(self) -> &'static str {
        match self {
            MaxKind::Point => "I",
            MaxKind::Sphere => "II",
            MaxKind::FourManifold => "III",
        }
    }
}

/// Dimensions of the extremal components. The minimum is always an isolated
/// point after normalizing by [`flip`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtremalProfile {
    pub min_dim: usize,
    pub max_dim: usize,
}

impl ExtremalProfile {
    pub fn new(min_dim: usize, max_dim: usize) -> Self {
        ExtremalProfile { min_dim, max_dim }
    }

    pub fn max_kind(self) -> Result<MaxKind> {
        if self.min_dim != 0 {
            return Err(Error::InconsistentFixedPointData(format!(
                "profile ({}, {}) has a non-isolated minimum; flip it first",
                self.min_dim, self.max_dim
            )));
        }
        MaxKind::from_dim(self.max_dim)
            .ok_or_else(|| Error::InconsistentFixedPointData(format!("no maximum of dimension {}", self.max_dim)))
    }
}

/// The discrete data that determines a fixed point data with an isolated
/// minimum: the maximum, the number of points at levels -1 and 1, and the
/// classes and genera of the surfaces at level 0 in `P2 # k_minus P2bar`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blueprint {
    pub max: MaxKind,
    pub k_minus: usize,
    pub k_plus: usize,
    pub surfaces: Vec<(Vec<i64>, u32)>,
}

impl Blueprint {
    pub fn new(max: MaxKind, k_minus: usize, k_plus: usize, mut surfaces: Vec<(Vec<i64>, u32)>) -> Self {
        surfaces.sort();
        Blueprint { max, k_minus, k_plus, surfaces }
    }

    pub fn lattice(&self) -> LatticeKind {
        LatticeKind::BlowupOfP2(self.k_minus)
    }

    pub fn crit(&self) -> Vec<i64> {
        let mut c = Vec::new();
        if self.k_minus > 0 {
            c.push(-1);
        }
        if !self.surfaces.is_empty() {
            c.push(0);
        }
        if self.k_plus > 0 {
            c.push(1);
        }
        c
    }

    pub fn total(&self) -> Vec<i64> {
        let mut t = vec![0; self.k_minus + 1];
        for (v, _) in &self.surfaces {
            for (a, b) in t.iter_mut().zip(v) {
                *a += b;
            }
        }
        t
    }

    /// Representative modulo permutations of the exceptional classes, which
    /// all arise at the same level and are therefore interchangeable.
    pub fn canonical(&self) -> Blueprint {
        let k = self.k_minus;
        let mut best: Option<Vec<(Vec<i64>, u32)>> = None;
        for_each_permutation(k, &mut |perm| {
            let mut s: Vec<(Vec<i64>, u32)> = self
                .surfaces
                .iter()
                .map(|(v, g)| {
                    let mut w = vec![v[0]];
                    w.extend(perm.iter().map(|&i| v[1 + i]));
                    (w, *g)
                })
                .collect();
            s.sort();
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        });
        Blueprint { surfaces: best.unwrap_or_default(), ..self.clone() }
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.surfaces
            .iter()
            .flat_map(|(v, _)| v.iter())
            .chain(self.total().iter())
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }
}

fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(p: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if p.len() == used.len() {
            f(p);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                p.push(i);
                go(p, used, f);
                p.pop();
                used[i] = false;
            }
        }
    }
    go(&mut Vec::with_capacity(n), &mut vec![false; n], f);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub betti: [i64; 7],
    pub chern: i64,
    pub capacities: Option<(Rational, Rational)>,
}

/// A topological fixed point data: the critical levels with their fixed
/// components, and the reduced spaces in between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tfd {
    pub label: Option<String>,
    pub events: Vec<CrossingEvent>,
    pub slices: Vec<SliceState>,
    pub derived: Option<Derived>,
    pub blueprint: Option<Blueprint>,
}

impl Tfd {
    /// Builds the events of `bp`, annotating normal degrees from the sweep.
    pub fn assemble(bp: &Blueprint) -> Result<Tfd> {
        let min = FixedComponentSpec::minimum_point();
        let mut events = vec![CrossingEvent::new(-3, vec![min.clone()])];
        let mut slice = initial_slice(&min)?;
        let step = |events: &mut Vec<CrossingEvent>, slice: &mut SliceState, ev: CrossingEvent| -> Result<()> {
            *slice = cross(&slice.with_hi(q(ev.level)), &ev)?;
            events.push(ev);
            Ok(())
        };
        if bp.k_minus > 0 {
            step(&mut events, &mut slice, CrossingEvent::new(-1, vec![FixedComponentSpec::point([-1, 1, 1]); bp.k_minus]))?;
        }
        if !bp.surfaces.is_empty() {
            let lattice = slice.lattice;
            if lattice != bp.lattice() {
                return Err(Error::LatticeMismatch(lattice.to_string(), bp.lattice().to_string()));
            }
            let classes: Vec<CohClass> = bp.surfaces.iter().map(|(v, _)| CohClass::from_ints(lattice, v)).collect();
            let total = classes.iter().fold(CohClass::zero(lattice), |acc, c| &acc + c);
            let e_minus = slice.euler.clone();
            let e_plus = &e_minus + &total;
            let mut comps = Vec::new();
            for (class, (_, genus)) in classes.into_iter().zip(&bp.surfaces) {
                let bp_ = int(&e_plus.dot(&class))?;
                let bm = -int(&e_minus.dot(&class))?;
                comps.push(FixedComponentSpec::interior_surface(class, *genus, (bp_, bm)));
            }
            step(&mut events, &mut slice, CrossingEvent::new(0, comps))?;
        }
        if bp.k_plus > 0 {
            step(&mut events, &mut slice, CrossingEvent::new(1, vec![FixedComponentSpec::point([-1, -1, 1]); bp.k_plus]))?;
        }
        let top = slice.with_hi(q(bp.max.level()));
        let max = match bp.max {
            MaxKind::Point => FixedComponentSpec::maximum_point(),
            MaxKind::Sphere => FixedComponentSpec::extremal_surface(2, (bmax_from_euler(&top)?.0, 0)),
            MaxKind::FourManifold => FixedComponentSpec::extremal_four_manifold(1, top.euler.clone()),
        };
        events.push(CrossingEvent::new(bp.max.level(), vec![max]));
        let slices = sweep(&events)?;
        Ok(Tfd { label: None, events, slices, derived: None, blueprint: Some(bp.clone()) })
    }

    pub fn components(&self) -> impl Iterator<Item = &FixedComponentSpec> {
        self.events.iter().flat_map(|e| e.components.iter())
    }

    pub fn minimum(&self) -> &FixedComponentSpec {
        &self.events[0].components[0]
    }

    pub fn maximum(&self) -> &FixedComponentSpec {
        &self.events[self.events.len() - 1].components[0]
    }

    pub fn levels(&self) -> Vec<i64> {
        self.events.iter().map(|e| e.level).collect()
    }

    pub fn count_at(&self, level: i64) -> usize {
        self.events.iter().filter(|e| e.level == level).map(|e| e.components.len()).sum()
    }

    /// The slice whose closure contains `t`, preferring the one below.
    pub fn slice_at(&self, t: &Rational) -> Option<&SliceState> {
        self.slices.iter().find(|s| &s.lo <= t && t <= &s.hi)
    }

    /// Lattice of the reduced space at level 0.
    pub fn reduced_lattice(&self) -> Option<LatticeKind> {
        self.slice_at(&q(0)).map(|s| s.lattice)
    }

    pub fn surfaces(&self) -> Vec<(CohClass, u32)> {
        self.components()
            .filter_map(|c| match &c.kind {
                ComponentKind::InteriorSurface { class, genus, .. } => Some((class.clone(), *genus)),
                _ => None,
            })
            .collect()
    }

    pub fn label_or_default(&self) -> String {
        self.label.clone().unwrap_or_else(|| "?".into())
    }

    /// One short string per critical level, e.g. `-1: 3 pt` or `0: S2 [2u]`.
    pub fn component_summary(&self) -> Vec<String> {
        self.events
            .iter()
            .map(|ev| {
                let body: Vec<String> = match crossing_type(ev) {
                    Ok(CrossingType::BlowUp(n) | CrossingType::BlowDown(n)) => vec![format!("{n} pt")],
                    _ => ev.components.iter().map(describe).collect(),
                };
                format!("{}: {}", ev.level, body.join(" + "))
            })
            .collect()
    }
}

fn describe(c: &FixedComponentSpec) -> String {
    match &c.kind {
        ComponentKind::IsolatedPoint { .. } => "pt".into(),
        ComponentKind::InteriorSurface { class, genus, .. } => {
            format!("{} [{class}]", if *genus == 0 { "S2".to_string() } else { format!("Sigma{genus}") })
        }
        ComponentKind::ExtremalSurface { .. } => "S2".into(),
        ComponentKind::ExtremalFourManifold { lattice, .. } => lattice.surface_name(),
    }
}

fn int(r: &Rational) -> Result<i64> {
    to_i64(r).ok_or_else(|| Error::InternalArithmeticError(format!("{r} is not an integer")))
}

impl fmt::Display for Tfd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{ {} }}", self.label_or_default(), self.component_summary().join("; "))
    }
}

/// Orientation reversal `H -> -H`: levels and weights change sign, the two
/// normal degrees of an interior surface trade places and circle-bundle
/// Euler classes change sign.
pub fn flip(t: &Tfd) -> Result<Tfd> {
    let flip_component = |c: &FixedComponentSpec| -> FixedComponentSpec {
        match &c.kind {
            ComponentKind::IsolatedPoint { weights } => FixedComponentSpec::point(weights.map(|w| -w)),
            ComponentKind::InteriorSurface { class, genus, normal_degrees: (bp, bm) } => {
                FixedComponentSpec::interior_surface(class.clone(), *genus, (*bm, *bp))
            }
            ComponentKind::ExtremalSurface { normal_degrees } => {
                FixedComponentSpec::extremal_surface(-c.level, *normal_degrees)
            }
            ComponentKind::ExtremalFourManifold { euler_at_boundary, .. } => {
                FixedComponentSpec::extremal_four_manifold(-c.level, -euler_at_boundary)
            }
        }
    };
    let events: Vec<CrossingEvent> = t
        .events
        .iter()
        .rev()
        .map(|ev| CrossingEvent::new(-ev.level, ev.components.iter().map(flip_component).collect()))
        .collect();
    let events = relabel_level_zero(t, events)?;
    let slices = sweep(&events)?;
    Ok(Tfd { label: t.label.clone(), events, slices, derived: None, blueprint: None })
}

/// The flipped sweep reaches level 0 from the other end, so its basis of
/// `H^2(M_0)` need not be the one the level-0 classes were written in. The
/// two are matched by an isometry that carries `[omega_0]` and `e` of the
/// original slice above 0 to `[omega_0]` and `-e` of the flipped slice below.
fn relabel_level_zero(t: &Tfd, mut events: Vec<CrossingEvent>) -> Result<Vec<CrossingEvent>> {
    let Some(z) = events
        .iter()
        .position(|ev| ev.level == 0 && ev.components.iter().any(|c| matches!(c.kind, ComponentKind::InteriorSurface { .. })))
    else {
        return Ok(events);
    };
    let [min] = events[0].components.as_slice() else {
        return Err(Error::InconsistentFixedPointData("the minimum must be connected".into()));
    };
    let mut below = initial_slice(min)?;
    for ev in &events[1..z] {
        below = cross(&below.with_hi(q(ev.level)), ev)?;
    }
    let above = t
        .slices
        .iter()
        .find(|s| s.lo.is_zero())
        .ok_or_else(|| Error::InconsistentFixedPointData("no slice above level 0".into()))?;
    let zero = q(0);
    let pairs = [(above.omega(&zero), below.omega(&zero)), (above.euler.clone(), -&below.euler)];
    let phi = find_isometry(above.lattice, below.lattice, &pairs).ok_or_else(|| {
        Error::InconsistentFixedPointData(format!("no isometry between {} and {} at level 0", above.lattice, below.lattice))
    })?;
    for c in &mut events[z].components {
        if let ComponentKind::InteriorSurface { class, .. } = &mut c.kind {
            *class = phi.apply(class)?;
        }
    }
    Ok(events)
}

/// Same fixed point data up to relabeling `H^2(M_0)`: identical levels and
/// components away from the level-0 surfaces, and an isometry fixing
/// `[omega_0]` and the Euler class below 0 that carries the surface classes
/// of `a` onto those of `b`.
pub fn equivalent(a: &Tfd, b: &Tfd) -> bool {
    if a.events == b.events {
        return true;
    }
    let strip = |t: &Tfd| -> Vec<(i64, Vec<FixedComponentSpec>)> {
        t.events
            .iter()
            .map(|ev| {
                let kept = ev.components.iter().filter(|c| !matches!(c.kind, ComponentKind::InteriorSurface { .. }));
                (ev.level, kept.cloned().collect())
            })
            .collect()
    };
    let (za, zb) = (surface_classes(a), surface_classes(b));
    if strip(a) != strip(b) || za.len() != zb.len() || za.is_empty() {
        return false;
    }
    let Some(below) = a.slices.iter().find(|s| s.hi.is_zero()) else { return false };
    if b.slices.iter().find(|s| s.hi.is_zero()) != Some(below) {
        return false;
    }
    let w = below.omega(&q(0));
    let fixed = [(w.clone(), w), (below.euler.clone(), below.euler.clone())];
    permutations(zb.len()).into_iter().any(|p| {
        let mut pairs = fixed.to_vec();
        if p.iter().enumerate().any(|(i, &j)| za[i].1 != zb[j].1) {
            return false;
        }
        pairs.extend(p.iter().enumerate().map(|(i, &j)| (za[i].0.clone(), zb[j].0.clone())));
        find_isometry(below.lattice, below.lattice, &pairs).is_some()
    })
}

/// Genus and normal degrees of a surface.
type SurfaceShape = (u32, (i64, i64));

fn surface_classes(t: &Tfd) -> Vec<(CohClass, SurfaceShape)> {
    t.components()
        .filter_map(|c| match &c.kind {
            ComponentKind::InteriorSurface { class, genus, normal_degrees } => {
                Some((class.clone(), (*genus, *normal_degrees)))
            }
            _ => None,
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(H_smin - H_min, H_max - H_min)`: Gromov width and Hofer-Zehnder
/// capacity when the minimum is an isolated point.
pub fn capacities(t: &Tfd) -> Result<(Rational, Rational)> {
    if !matches!(t.minimum().kind, ComponentKind::IsolatedPoint { .. }) || t.events.len() < 2 {
        return Err(Error::CapacityFormulaInapplicable(format!("minimum {:?}", t.minimum().kind)));
    }
    let lo = t.events[0].level;
    Ok((q(t.events[1].level - lo), q(t.events[t.events.len() - 1].level - lo)))
}

/// Structural sanity: levels increase, extrema sit at the ends and nowhere
/// else.
pub fn check_structure(t: &Tfd) -> Result<()> {
    let bad = |m: String| Err(Error::InconsistentFixedPointData(m));
    if t.events.len() < 2 {
        return bad("fewer than two critical levels".into());
    }
    for w in t.events.windows(2) {
        if w[0].level >= w[1].level {
            return bad(format!("levels {} and {} out of order", w[0].level, w[1].level));
        }
    }
    for (i, ev) in t.events.iter().enumerate() {
        if !(-3..=3).contains(&ev.level) {
            return bad(format!("level {} outside [-3, 3]", ev.level));
        }
        for c in &ev.components {
            c.validate()?;
            if c.level != ev.level {
                return bad(format!("component at {} listed at {}", c.level, ev.level));
            }
            let end = i == 0 || i + 1 == t.events.len();
            let extremal = c.is_minimum() || c.is_maximum();
            if end != extremal {
                return bad(format!("component {c:?} at position {i}"));
            }
        }
        if i == 0 || i + 1 == t.events.len() {
            if ev.components.len() != 1 {
                return bad(format!("disconnected extremum at level {}", ev.level));
            }
        } else {
            crossing_type(ev)?;
        }
    }
    if !t.minimum().is_minimum() || !t.maximum().is_maximum() {
        return bad("extrema are not a minimum and a maximum".into());
    }
    Ok(())
}

/// DH positivity and continuity, crossing rules, and the boundary
/// conditions at the maximum.
pub fn check_slices(t: &Tfd) -> Result<()> {
    check_structure(t)?;
    let replay = sweep(&t.events)?;
    if replay != t.slices {
        return Err(Error::InconsistentFixedPointData("stored slices differ from the replayed sweep".into()));
    }
    for s in &t.slices {
        check_open_positivity(s)?;
    }
    for (i, ev) in t.events[1..t.events.len() - 1].iter().enumerate() {
        let (before, after) = (&t.slices[i], &t.slices[i + 1]);
        let c = q(ev.level);
        if before.dh(&c)? != after.dh(&c)? {
            return Err(Error::AreaContinuityViolation(format!("DH jumps at {}", ev.level)));
        }
        match crossing_type(ev)? {
            CrossingType::BlowUp(m) => {
                check_level_positivity(before, &c)?;
                if !check_dh_decrease(before, after, m)? {
                    return Err(Error::InconsistentFixedPointData(format!("DH drop at {} is not {m} s^2", ev.level)));
                }
            }
            CrossingType::Surfaces => check_level_positivity(before, &c)?,
            CrossingType::BlowDown(_) => check_level_positivity(after, &c)?,
        }
    }
    check_maximum(&t.slices[t.slices.len() - 1], t.maximum())
}

/// Per-component conditions on interior surfaces: integral classes,
/// pairwise disjoint, positive area, genus from adjunction, Li positivity,
/// and normal degrees matching the Euler classes on either side.
pub fn check_surfaces(t: &Tfd) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidFixedComponent(m));
    for (i, ev) in t.events.iter().enumerate() {
        if !matches!(crossing_type(ev), Ok(CrossingType::Surfaces)) || i == 0 {
            continue;
        }
        let (before, after) = (&t.slices[i - 1], &t.slices[i]);
        let lattice = SurfaceLattice::new(before.lattice)?;
        let w = before.omega(&q(ev.level));
        let mut classes: Vec<&CohClass> = Vec::new();
        for c in &ev.components {
            let ComponentKind::InteriorSurface { class, genus, normal_degrees } = &c.kind else { unreachable!() };
            let Some(v) = class.to_ints() else { return bad(format!("{class} is not integral")) };
            if !w.dot(class).is_positive() {
                return bad(format!("{class} has area {}", w.dot(class)));
            }
            if adjunction_genus(&lattice, class) != Some(*genus) {
                return bad(format!("{class} cannot carry a surface of genus {genus}"));
            }
            if !li_positive(before.lattice, &v) {
                return bad(format!("{class} meets an exceptional class negatively"));
            }
            let expected = (int(&after.euler.dot(class))?, -int(&before.euler.dot(class))?);
            if *normal_degrees != expected {
                return bad(format!("{class} has normal degrees {normal_degrees:?}, expected {expected:?}"));
            }
            classes.push(class);
        }
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                if !a.dot(b).is_zero() {
                    return bad(format!("{a} and {b} intersect"));
                }
            }
        }
    }
    Ok(())
}

/// The full predicate suite. Returns the derived invariants.
pub fn verify(t: &Tfd) -> Result<Derived> {
    check_slices(t)?;
    check_surfaces(t)?;
    let comps: Vec<FixedComponentSpec> = t.components().cloned().collect();
    let chern = chern_number_of(&comps)?;
    let betti = betti_of(&comps);
    if (0..7).any(|i| betti[i] != betti[6 - i]) {
        return Err(Error::InconsistentFixedPointData(format!("Betti numbers {betti:?} are not palindromic")));
    }
    let caps = capacities(t).ok();
    Ok(Derived { betti, chern, capacities: caps })
}
