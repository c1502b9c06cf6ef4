//! Expected classification, one row per fixed point data.

use super::tfd::{Blueprint, MaxKind};

#[derive(Clone, Copy, Debug)]
pub struct GoldenRow {
    pub label: &'static str,
    pub max: MaxKind,
    pub k_minus: usize,
    pub k_plus: usize,
    /// Classes of the level-0 components in `P2 # k_minus P2bar` with genera.
    pub surfaces: &'static [(&'static [i64], u32)],
    pub chern: i64,
    pub b2: i64,
    pub b3: i64,
    /// Printed maximum, second smallest and minimum critical values.
    pub h_max: i64,
    pub h_smin: i64,
    pub h_min: i64,
}

impl GoldenRow {
    pub fn blueprint(&self) -> Blueprint {
        Blueprint::new(
            self.max,
            self.k_minus,
            self.k_plus,
            self.surfaces.iter().map(|(v, g)| (v.to_vec(), *g)).collect(),
        )
    }

    /// `(w_G, c_HZ)` as printed.
    pub fn capacities(&self) -> (i64, i64) {
        (self.h_smin - self.h_min, self.h_max - self.h_min)
    }
}

#[allow(clippy::too_many_arguments)]
const fn row(
    label: &'static str,
    max: MaxKind,
    k_minus: usize,
    k_plus: usize,
    surfaces: &'static [(&'static [i64], u32)],
    chern: i64,
    b2: i64,
    b3: i64,
    h: (i64, i64, i64),
) -> GoldenRow {
    GoldenRow { label, max, k_minus, k_plus, surfaces, chern, b2, b3, h_max: h.0, h_smin: h.1, h_min: h.2 }
}

use MaxKind::{FourManifold as F, Point as P, Sphere as S};

pub const GOLDEN6: [GoldenRow; 18] = [
    row("I-1", P, 0, 0, &[(&[2], 0)], 54, 1, 0, (3, -1, -3)),
    row("I-2", P, 3, 3, &[], 48, 3, 0, (3, -1, -3)),
    row("I-3", P, 1, 1, &[(&[1, -1], 0), (&[1, -1], 0)], 52, 3, 0, (3, -1, -3)),
    row("II-3.1", S, 1, 0, &[(&[0, 1], 0)], 62, 2, 0, (2, -1, -3)),
    row("II-3.2", S, 1, 0, &[(&[1, 0], 0)], 54, 2, 0, (2, -1, -3)),
    row("II-3.3", S, 1, 0, &[(&[2, -1], 0)], 46, 2, 0, (2, -1, -3)),
    row("II-4.1", S, 2, 1, &[(&[1, -1, 0], 0), (&[1, -1, -1], 0)], 44, 4, 0, (2, -1, -3)),
    row("II-4.2", S, 3, 2, &[(&[1, 0, -1, -1], 0)], 42, 4, 0, (2, -1, -3)),
    row("III-1", F, 0, 0, &[], 64, 1, 0, (1, 1, -3)),
    row("III-2", F, 1, 0, &[], 56, 2, 0, (1, -1, -3)),
    row("III-3.1", F, 0, 0, &[(&[1], 0)], 54, 2, 0, (1, 0, -3)),
    row("III-3.2", F, 0, 0, &[(&[2], 0)], 46, 2, 0, (1, 0, -3)),
    row("III-3.3", F, 0, 0, &[(&[3], 1)], 40, 2, 2, (1, 0, -3)),
    row("III-4.1", F, 1, 0, &[(&[0, 1], 0)], 50, 3, 0, (1, -1, -3)),
    row("III-4.2", F, 1, 0, &[(&[1, -1], 0)], 50, 3, 0, (1, -1, -3)),
    row("III-4.3", F, 1, 0, &[(&[1, 0], 0)], 46, 3, 0, (1, -1, -3)),
    row("III-4.4", F, 1, 0, &[(&[2, -1], 0)], 42, 3, 0, (1, -1, -3)),
    row("III-4.5", F, 2, 0, &[(&[1, -1, -1], 0)], 46, 4, 0, (1, -1, -3)),
];

/// A printed value that disagrees with the rest of the same row.
#[derive(Clone, Copy, Debug)]
pub struct Erratum {
    pub label: &'static str,
    pub field: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

pub const ERRATA: [Erratum; 1] = [Erratum {
    label: "I-1",
    field: "gromov_width",
    printed: "2",
    corrected: "3",
    reason: "the printed second critical value -1 is not a critical value of I-1, whose critical set is {-3, 0, 3}; \
             the capacity formula then gives 0 - (-3) = 3",
}];

pub fn erratum(label: &str, field: &str) -> Option<&'static Erratum> {
    ERRATA.iter().find(|e| e.label == label && e.field == field)
}

pub fn golden_row(label: &str) -> Option<&'static GoldenRow> {
    GOLDEN6.iter().find(|r| r.label == label)
}

/// A survivor of the predicate suite that the printed table does not list.
#[derive(Clone, Copy, Debug)]
pub struct Unlisted {
    pub max: MaxKind,
    pub k_minus: usize,
    pub k_plus: usize,
    pub surfaces: &'static [(&'static [i64], u32)],
    pub chern: i64,
    pub b2: i64,
    /// Corpus polytope realizing it.
    pub witness: &'static str,
    pub reason: &'static str,
}

impl Unlisted {
    pub fn blueprint(&self) -> Blueprint {
        Blueprint::new(
            self.max,
            self.k_minus,
            self.k_plus,
            self.surfaces.iter().map(|(v, g)| (v.to_vec(), *g)).collect(),
        )
    }
}

pub const UNLISTED: [Unlisted; 1] = [Unlisted {
    max: S,
    k_minus: 2,
    k_plus: 1,
    surfaces: &[(&[1, -1, 0], 0)],
    chern: 48,
    b2: 3,
    witness: "P1xF1",
    reason: "vanishing class u - E1 - E2 at level 1; the exclusion argument for it continues [omega_t] past the \
             level-1 blow-down without the (t - 1)^2 correction, with which DH tends to 0 at the sphere maximum; \
             realized by P1 x F1 with xi = (1, 1, 1)",
}];

/// The documented explanation for an unlisted survivor, if there is one.
pub fn unlisted(bp: &Blueprint) -> Option<&'static Unlisted> {
    let key = bp.canonical();
    UNLISTED.iter().find(|u| u.blueprint().canonical() == key)
}
