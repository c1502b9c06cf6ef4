//! Toric cross-checks: moment polytopes with a circle direction, their fixed
//! faces at balanced levels, and the comparison with the classifier rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::classifier6::Tfd;
use crate::error::{Error, Result};
use crate::lattice::LatticeKind;
use crate::localization::ComponentKind;
use crate::rational::to_i64;

pub type V3 = [i64; 3];

fn dot(a: &V3, b: &V3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det(a: &V3, b: &V3, c: &V3) -> i64 {
    dot(a, &cross(b, c))
}

fn content(v: &V3) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

fn primitive(v: &V3) -> V3 {
    let g = content(v).max(1);
    v.map(|x| x / g)
}

/// The facet `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: V3,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    pub name: String,
    pub vertices: Vec<V3>,
    pub edges: Vec<[usize; 2]>,
    pub facets: Vec<Facet>,
    #[serde(default)]
    pub reflexive: bool,
    /// Circle direction the file is meant to be checked with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<V3>,
    /// Classifier row the polytope is expected to realize.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    /// Vertex data rebuilt from the described construction rather than
    /// copied from listed coordinates.
    #[serde(default)]
    pub reconstructed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CircleDirection(pub V3);

impl CircleDirection {
    pub fn new(xi: V3) -> Result<Self> {
        if content(&xi) != 1 {
            return Err(Error::NonPrimitiveDirection(xi));
        }
        Ok(CircleDirection(xi))
    }

    /// Parses `a,b,c`.
    pub fn parse(s: &str) -> Option<Self> {
        let v: Vec<i64> = s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
        let xi: V3 = v.try_into().ok()?;
        CircleDirection::new(xi).ok()
    }
}

impl Polytope {
    pub fn from_json(s: &str) -> Result<Polytope> {
        let p: Polytope = serde_json::from_str(s).map_err(|e| Error::InvalidPolytope("<json>".into(), e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Polytope> {
        let s = fs::read_to_string(path).map_err(|e| Error::InvalidPolytope(path.display().to_string(), e.to_string()))?;
        Polytope::from_json(&s)
    }

    fn invalid(&self, msg: String) -> Error {
        Error::InvalidPolytope(self.name.clone(), msg)
    }

    /// Simple, with vertices and edges consistent with the facets.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut degree = vec![0; n];
        for &[a, b] in &self.edges {
            if a >= n || b >= n || a == b {
                return Err(self.invalid(format!("bad edge [{a}, {b}]")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(self.invalid(format!("vertex {v} meets {} edges", degree[v])));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let tight = self.facets.iter().filter(|f| dot(&f.normal, v) == f.offset).count();
            if self.facets.iter().any(|f| dot(&f.normal, v) < f.offset) || tight != 3 {
                return Err(self.invalid(format!("vertex {i} {v:?} is not a simple vertex of the facets")));
            }
        }
        for f in &self.facets {
            if content(&f.normal) != 1 {
                return Err(self.invalid(format!("facet normal {:?} is not primitive", f.normal)));
            }
        }
        Ok(())
    }

    /// Primitive generators of the edges leaving vertex `v`, with the edge index.
    pub fn generators(&self, v: usize) -> Vec<(usize, V3)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, &[a, b])| {
                let w = if a == v { b } else if b == v { a } else { return None };
                Some((i, primitive(&sub(&self.vertices[w], &self.vertices[v]))))
            })
            .collect()
    }

    pub fn is_delzant(&self) -> bool {
        (0..self.vertices.len()).all(|v| {
            let g = self.generators(v);
            det(&g[0].1, &g[1].1, &g[2].1).abs() == 1
        })
    }

    fn require_delzant(&self) -> Result<()> {
        for v in 0..self.vertices.len() {
            let g = self.generators(v);
            let d = det(&g[0].1, &g[1].1, &g[2].1);
            if d.abs() != 1 {
                return Err(Error::NotDelzant(self.name.clone(), format!("vertex {:?} has determinant {d}", self.vertices[v])));
            }
        }
        Ok(())
    }

    pub fn interior_lattice_points(&self) -> Vec<V3> {
        let lo: Vec<i64> = (0..3).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap_or(0)).collect();
        let hi: Vec<i64> = (0..3).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap_or(0)).collect();
        let mut out = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    let p = [x, y, z];
                    if self.facets.iter().all(|f| dot(&f.normal, &p) > f.offset) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// The unique interior lattice point, at lattice distance one from every facet.
    pub fn reflexive_center(&self) -> Result<V3> {
        let pts = self.interior_lattice_points();
        let [p] = pts[..] else {
            return Err(Error::NotReflexive(self.name.clone(), format!("{} interior lattice points", pts.len())));
        };
        if let Some(f) = self.facets.iter().find(|f| dot(&f.normal, &p) - f.offset != 1) {
            return Err(Error::NotReflexive(
                self.name.clone(),
                format!("facet {:?} >= {} is at distance {}", f.normal, f.offset, dot(&f.normal, &p) - f.offset),
            ));
        }
        Ok(p)
    }

    /// Vertex indices of facet `f` in cyclic order.
    pub fn facet_cycle(&self, f: usize) -> Vec<usize> {
        let facet = &self.facets[f];
        let on = |v: usize| dot(&facet.normal, &self.vertices[v]) == facet.offset;
        let edges: Vec<[usize; 2]> = self.edges.iter().copied().filter(|&[a, b]| on(a) && on(b)).collect();
        let Some(&[start, mut next]) = edges.first() else { return Vec::new() };
        let mut cycle = vec![start];
        let mut prev = start;
        while next != start && cycle.len() <= edges.len() {
            cycle.push(next);
            let step = edges
                .iter()
                .find_map(|&[a, b]| match (a == next, b == next) {
                    (true, _) if b != prev => Some(b),
                    (_, true) if a != prev => Some(a),
                    _ => None,
                })
                .unwrap_or(start);
            prev = next;
            next = step;
        }
        cycle
    }
}

/// Every primitive edge direction pairs with `xi` to -1, 0 or 1.
pub fn is_semifree(p: &Polytope, d: CircleDirection) -> Result<bool> {
    p.require_delzant()?;
    Ok((0..p.vertices.len()).all(|v| p.generators(v).iter().all(|(_, g)| dot(g, &d.0).abs() <= 1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceShape {
    Vertex,
    /// Lattice length of the edge.
    Edge { length: i64 },
    /// Number of edges of the polygon and the lattice of the fixed surface.
    Polygon { edges: usize, lattice: LatticeKind },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedFace {
    pub vertices: Vec<usize>,
    pub shape: FaceShape,
    /// Pairings of the edges leaving the face with `xi`.
    pub weights: Vec<i64>,
    pub level: i64,
}

impl FixedFace {
    pub fn dim(&self) -> usize {
        match self.shape {
            FaceShape::Vertex => 0,
            FaceShape::Edge { .. } => 2,
            FaceShape::Polygon { .. } => 4,
        }
    }

    pub fn index(&self) -> usize {
        2 * self.weights.iter().filter(|&&w| w < 0).count()
    }
}

fn polygon_lattice(p: &Polytope, f: usize) -> Result<(usize, LatticeKind)> {
    let cyc = p.facet_cycle(f);
    let n = cyc.len();
    let dir = |i: usize| sub(&p.vertices[cyc[(i + 1) % n]], &p.vertices[cyc[i]]);
    let parallel = |a: V3, b: V3| cross(&a, &b) == [0, 0, 0];
    let lattice = match n {
        3 => LatticeKind::BlowupOfP2(0),
        4 if parallel(dir(0), dir(2)) && parallel(dir(1), dir(3)) => LatticeKind::ProductOfSpheres,
        4 => LatticeKind::BlowupOfP2(1),
        5 => LatticeKind::BlowupOfP2(2),
        _ => return Err(Error::InvalidPolytope(p.name.clone(), format!("fixed polygon with {n} edges is not identified"))),
    };
    Ok((n, lattice))
}

/// Fixed vertices, edges and polygons with balanced levels.
pub fn fixed_faces(p: &Polytope, d: CircleDirection) -> Result<Vec<FixedFace>> {
    if !is_semifree(p, d)? {
        return Err(Error::NotSemifree(p.name.clone(), d.0));
    }
    let xi = &d.0;
    let pairings = |v: usize| -> Vec<(usize, i64)> { p.generators(v).iter().map(|(e, g)| (*e, dot(g, xi))).collect() };
    // (vertices, shape, weights, <v, xi>)
    let mut raw: Vec<(Vec<usize>, FaceShape, Vec<i64>, i64)> = Vec::new();
    for v in 0..p.vertices.len() {
        let w: Vec<i64> = pairings(v).iter().map(|x| x.1).collect();
        if w.iter().all(|&x| x != 0) {
            raw.push((vec![v], FaceShape::Vertex, w, dot(&p.vertices[v], xi)));
        }
    }
    for (i, &[a, b]) in p.edges.iter().enumerate() {
        let others = |v: usize| -> Vec<i64> { pairings(v).into_iter().filter(|x| x.0 != i).map(|x| x.1).collect() };
        let along = dot(&sub(&p.vertices[b], &p.vertices[a]), xi);
        let (wa, wb) = (others(a), others(b));
        if along == 0 && wa.iter().chain(&wb).all(|&x| x != 0) {
            let length = content(&sub(&p.vertices[b], &p.vertices[a]));
            raw.push((vec![a, b], FaceShape::Edge { length }, wa, dot(&p.vertices[a], xi)));
        }
    }
    for (f, facet) in p.facets.iter().enumerate() {
        if cross(&facet.normal, xi) != [0, 0, 0] {
            continue;
        }
        let cyc = p.facet_cycle(f);
        let v = cyc[0];
        let on = |w: usize| dot(&facet.normal, &p.vertices[w]) == facet.offset;
        let w: Vec<i64> = p
            .generators(v)
            .iter()
            .filter(|(e, _)| {
                let [a, b] = p.edges[*e];
                !(on(a) && on(b))
            })
            .map(|(_, g)| dot(g, xi))
            .collect();
        let (edges, lattice) = polygon_lattice(p, f)?;
        raw.push((cyc, FaceShape::Polygon { edges, lattice }, w, dot(&p.vertices[v], xi)));
    }
    let shifts: Vec<i64> = raw.iter().map(|(_, _, w, h)| -w.iter().sum::<i64>() - h).collect();
    if let Some(s) = shifts.first() {
        if shifts.iter().any(|t| t != s) {
            return Err(Error::NotBalanced(p.name.clone(), format!("shifts {shifts:?}")));
        }
    }
    let shift = shifts.first().copied().unwrap_or(0);
    let mut out: Vec<FixedFace> = raw
        .into_iter()
        .map(|(vertices, shape, weights, h)| FixedFace { vertices, shape, weights, level: h + shift })
        .collect();
    out.sort_by_key(|f| (f.level, f.dim(), f.vertices.clone()));
    Ok(out)
}

/// What the polytope and the classifier can both see of a fixed component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Footprint {
    Point { index: usize },
    Sphere { area: i64, genus: u32 },
    Surface { lattice: LatticeKind },
}

pub type Signature = Vec<(i64, Footprint)>;

/// Footprints of the faces, flipped when needed so the minimum is a point.
pub fn signature_of_faces(faces: &[FixedFace]) -> Signature {
    let lowest = faces.iter().min_by_key(|f| f.level);
    let flip = lowest.is_some_and(|f| f.dim() > 0);
    let mut sig: Signature = faces
        .iter()
        .map(|f| {
            let fp = match &f.shape {
                FaceShape::Vertex => Footprint::Point { index: if flip { 6 - f.index() } else { f.index() } },
                FaceShape::Edge { length } => Footprint::Sphere { area: *length, genus: 0 },
                FaceShape::Polygon { lattice, .. } => Footprint::Surface { lattice: *lattice },
            };
            (if flip { -f.level } else { f.level }, fp)
        })
        .collect();
    sig.sort();
    sig
}

pub fn signature_of_tfd(t: &Tfd) -> Signature {
    let mut sig: Signature = t
        .components()
        .map(|c| {
            let fp = match &c.kind {
                ComponentKind::IsolatedPoint { .. } => Footprint::Point { index: c.index() },
                ComponentKind::InteriorSurface { class, genus, .. } => {
                    let area = class.dot(&crate::lattice::CohClass::anticanonical(class.lattice()));
                    Footprint::Sphere { area: to_i64(&area).unwrap_or(i64::MIN), genus: *genus }
                }
                ComponentKind::ExtremalSurface { normal_degrees: (a, b) } => Footprint::Sphere { area: 2 + a + b, genus: 0 },
                ComponentKind::ExtremalFourManifold { lattice, .. } => Footprint::Surface { lattice: *lattice },
            };
            (c.level, fp)
        })
        .collect();
    sig.sort();
    sig
}

/// `6 Vol(P)`, which equals `c1^3` of the toric manifold when `P` is reflexive.
pub fn chern_number_from_volume(p: &Polytope) -> Result<i64> {
    let c = p.reflexive_center()?;
    let mut total = 0;
    for f in 0..p.facets.len() {
        let cyc = p.facet_cycle(f);
        let v0 = sub(&p.vertices[cyc[0]], &c);
        for w in cyc[1..].windows(2) {
            total += det(&v0, &sub(&p.vertices[w[0]], &c), &sub(&p.vertices[w[1]], &c)).abs();
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct ToricMatch {
    pub polytope: String,
    pub label: String,
    pub faces: Vec<FixedFace>,
    pub chern_from_volume: i64,
}

/// Matches the fixed faces of `(p, d)` against `rows` by level, dimension,
/// index and area, then confirms the Chern number and Euler characteristic.
pub fn tfd_from_polytope(p: &Polytope, d: CircleDirection, rows: &[Tfd]) -> Result<ToricMatch> {
    let faces = fixed_faces(p, d)?;
    let sig = signature_of_faces(&faces);
    let hits: Vec<&Tfd> = rows.iter().filter(|t| signature_of_tfd(t) == sig).collect();
    let t = match hits[..] {
        [t] => t,
        [] => return Err(Error::NoMatchingTfd(p.name.clone(), format!("fixed faces {sig:?}"))),
        _ => {
            let labels: Vec<String> = hits.iter().map(|t| t.label_or_default()).collect();
            return Err(Error::NoMatchingTfd(p.name.clone(), format!("ambiguous between {}", labels.join(", "))));
        }
    };
    let chern = chern_number_from_volume(p)?;
    if let Some(derived) = &t.derived {
        if derived.chern != chern {
            return Err(Error::NoMatchingTfd(
                p.name.clone(),
                format!("{} has c1^3 = {}, the polytope gives {chern}", t.label_or_default(), derived.chern),
            ));
        }
        let chi: i64 = derived.betti.iter().sum();
        if chi != p.vertices.len() as i64 {
            return Err(Error::NoMatchingTfd(
                p.name.clone(),
                format!("{} vertices, Euler characteristic of {} is {chi}", p.vertices.len(), t.label_or_default()),
            ));
        }
    }
    Ok(ToricMatch { polytope: p.name.clone(), label: t.label_or_default(), faces, chern_from_volume: chern })
}

/// Default corpus: `$HAMFIX_CORPUS`, else the repository's `data/polytopes`.
pub fn default_corpus_dir() -> PathBuf {
    match std::env::var_os("HAMFIX_CORPUS") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/polytopes"),
    }
}

/// All `*.json` polytopes in `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<Polytope>> {
    let err = |e: std::io::Error| Error::InvalidPolytope(dir.display().to_string(), e.to_string());
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Polytope::load(p)).collect()
}

/// Number of fixed faces per (level, dimension).
pub fn level_profile(faces: &[FixedFace]) -> BTreeMap<(i64, usize), usize> {
    let mut m = BTreeMap::new();
    for f in faces {
        *m.entry((f.level, f.dim())).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(n: i64) -> Polytope {
        let vertices = vec![[0, 0, 0], [n, 0, 0], [0, n, 0], [0, 0, n]];
        let edges = vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let facets = vec![
            Facet { normal: [1, 0, 0], offset: 0 },
            Facet { normal: [0, 1, 0], offset: 0 },
            Facet { normal: [0, 0, 1], offset: 0 },
            Facet { normal: [-1, -1, -1], offset: -n },
        ];
        Polytope { name: format!("simplex{n}"), vertices, edges, facets, reflexive: true, xi: None, row: None, reconstructed: false }
    }

    fn dir(v: V3) -> CircleDirection {
        CircleDirection::new(v).unwrap()
    }

    #[test]
    fn simplex_semifree_and_levels() {
        let p = simplex(4);
        p.validate().unwrap();
        assert!(is_semifree(&p, dir([1, 1, 1])).unwrap());
        assert!(!is_semifree(&p, dir([2, 1, 1])).unwrap());
        let faces = fixed_faces(&p, dir([1, 1, 1])).unwrap();
        assert_eq!(faces.len(), 2);
        assert_eq!((faces[0].level, faces[0].dim()), (-3, 0));
        assert_eq!((faces[1].level, faces[1].dim()), (1, 4));
        assert_eq!(faces[1].shape, FaceShape::Polygon { edges: 3, lattice: LatticeKind::BlowupOfP2(0) });
        assert_eq!(chern_number_from_volume(&p).unwrap(), 64);
    }

    #[test]
    fn non_reflexive_and_non_primitive() {
        assert!(matches!(chern_number_from_volume(&simplex(3)), Err(Error::NotReflexive(..))));
        assert!(matches!(CircleDirection::new([2, 2, 0]), Err(Error::NonPrimitiveDirection(_))));
        assert_eq!(CircleDirection::parse("0,-1,0"), Some(CircleDirection([0, -1, 0])));
        assert_eq!(CircleDirection::parse("1,2"), None);
    }

    #[test]
    fn non_delzant_rejected() {
        // weighted simplex x + y + 2z <= 4: the generators at (0,0,2) span index 4
        let mut p = simplex(4);
        p.vertices[3] = [0, 0, 2];
        p.facets[3] = Facet { normal: [-1, -1, -2], offset: -4 };
        p.validate().unwrap();
        assert!(!p.is_delzant());
        assert!(matches!(is_semifree(&p, dir([1, 1, 1])), Err(Error::NotDelzant(..))));
    }

    #[test]
    fn json_round_trip() {
        let p = simplex(4);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(Polytope::from_json(&s).unwrap(), p);
    }
}
