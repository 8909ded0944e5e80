//! The rank-3 polytope built from the string C-group by the coset
//! construction: faces of rank `i` are the right cosets of
//! `⟨ρ_j : j ≠ i⟩`, and two faces of different rank are incident when their
//! cosets meet.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use thiserror::Error;

use crate::cgroup::{schlafli_type, CGroupGenerators};
use crate::extension::{ExtElement, Extension};
use crate::json;
use crate::pgroup::GroupParams;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counts {
    #[serde(serialize_with = "json::biguint")]
    pub vertices: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub edges: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub faces: BigUint,
    #[serde(serialize_with = "json::biguint")]
    pub flags: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("|R| = {order} exceeds the enumeration cap {cap}; counts from closed forms only")]
    CapExceeded {
        cap: usize,
        order: BigUint,
        counts: Box<Counts>,
        euler: BigInt,
    },
    #[error("unsupported lattice format {0:?} (expected json or dot)")]
    UnsupportedFormat(String),
}

/// `V = p^{m-1}`, `E = p^m`, `F = 2p^{m-1}`, one flag per element of `R`.
pub fn closed_form_counts(params: &GroupParams) -> Counts {
    let pm = params.group_order().clone();
    let pm1 = params.abelian_order();
    Counts {
        vertices: pm1.clone(),
        edges: pm,
        faces: pm1 * 2u32,
        flags: params.extension_order(),
    }
}

/// `V - E + F = p^{m-1} (3 - p)`.
pub fn euler_characteristic(params: &GroupParams) -> BigInt {
    BigInt::from(params.abelian_order()) * (3 - params.p() as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub rank: u8,
    pub index: usize,
    /// Least coset member in the normal-form ordering.
    pub rep: ExtElement,
    /// Indices into [`FaceLattice::elements`].
    pub members: Vec<usize>,
}

impl Face {
    pub fn id(&self) -> String {
        face_id(self.rank, self.index)
    }
}

fn face_id(rank: u8, index: usize) -> String {
    format!("r{rank}_{index}")
}

/// A face as `(rank, index)`.
pub type FaceRef = (u8, usize);

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub p: u64,
    pub e: u32,
    pub r: u64,
    pub m: u64,
    pub schlafli: (u64, u64),
    elements: Vec<ExtElement>,
    faces: [Vec<Face>; 3],
    face_of: [Vec<usize>; 3],
    incidences: BTreeSet<(FaceRef, FaceRef)>,
    flags: usize,
}

impl FaceLattice {
    pub fn elements(&self) -> &[ExtElement] {
        &self.elements
    }

    pub fn faces(&self, rank: usize) -> &[Face] {
        &self.faces[rank]
    }

    /// Index of the rank-`rank` face containing element `element`.
    pub fn face_of(&self, rank: usize, element: usize) -> usize {
        self.face_of[rank][element]
    }

    /// Incident pairs with the lower rank first, sorted.
    pub fn incidences(&self) -> impl Iterator<Item = &(FaceRef, FaceRef)> {
        self.incidences.iter()
    }

    pub fn flag_count(&self) -> usize {
        self.flags
    }

    pub fn counts(&self) -> Counts {
        Counts {
            vertices: BigUint::from(self.faces[0].len()),
            edges: BigUint::from(self.faces[1].len()),
            faces: BigUint::from(self.faces[2].len()),
            flags: BigUint::from(self.flags),
        }
    }

    pub fn euler(&self) -> i64 {
        self.faces[0].len() as i64 - self.faces[1].len() as i64 + self.faces[2].len() as i64
    }

    /// Faces of rank `other` incident to `(rank, index)`.
    pub fn neighbours(&self, rank: u8, index: usize, other: u8) -> Vec<usize> {
        self.incidences
            .iter()
            .filter_map(|&(a, b)| {
                if a == (rank, index) && b.0 == other {
                    Some(b.1)
                } else if b == (rank, index) && a.0 == other {
                    Some(a.1)
                } else {
                    None
                }
            })
            .collect()
    }

    fn degree_table(&self, rank: u8, other: u8) -> Vec<usize> {
        let mut deg = vec![0usize; self.faces[rank as usize].len()];
        for &(a, b) in &self.incidences {
            if a.0 == rank && b.0 == other {
                deg[a.1] += 1;
            } else if b.0 == rank && a.0 == other {
                deg[b.1] += 1;
            }
        }
        deg
    }

    /// Every edge meets exactly two vertices and exactly two 2-faces.
    pub fn check_diamond(&self) -> bool {
        self.degree_table(1, 0).iter().all(|&d| d == 2)
            && self.degree_table(1, 2).iter().all(|&d| d == 2)
    }

    /// Edges per vertex and edges per 2-face, if constant.
    pub fn uniform_degrees(&self) -> Option<(usize, usize)> {
        let uniform = |v: Vec<usize>| {
            let first = *v.first()?;
            v.iter().all(|&d| d == first).then_some(first)
        };
        Some((
            uniform(self.degree_table(0, 1))?,
            uniform(self.degree_table(2, 1))?,
        ))
    }

    /// The incidence graph on all faces is connected.
    pub fn is_connected(&self) -> bool {
        let total: usize = self.faces.iter().map(Vec::len).sum();
        if total == 0 {
            return true;
        }
        let offset = [
            0,
            self.faces[0].len(),
            self.faces[0].len() + self.faces[1].len(),
        ];
        let node = |f: FaceRef| offset[f.0 as usize] + f.1;
        let mut adj = vec![Vec::new(); total];
        for &(a, b) in &self.incidences {
            adj[node(a)].push(node(b));
            adj[node(b)].push(node(a));
        }
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == total
    }
}

/// Enumerates `R`, partitions it into right cosets of the three maximal
/// parabolic subgroups, and records incidences and flags.
pub fn build_lattice(
    ext: &Extension,
    gens: &CGroupGenerators,
    cap: usize,
) -> Result<FaceLattice, PolytopeError> {
    let params = ext.group().params();
    let cap_err = || PolytopeError::CapExceeded {
        cap,
        order: params.extension_order(),
        counts: Box::new(closed_form_counts(params)),
        euler: euler_characteristic(params),
    };
    if !ext.fits(cap) {
        return Err(cap_err());
    }
    let all = ext.closure(&gens.as_array(), cap).map_err(|_| cap_err())?;

    let mut faces: [Vec<Face>; 3] = Default::default();
    let mut face_of: [Vec<usize>; 3] = Default::default();
    for rank in 0..3 {
        let parabolic = ext
            .closure(&gens.omitting(rank), cap)
            .map_err(|_| cap_err())?;
        let mut assigned = vec![usize::MAX; all.len()];
        let mut cosets: Vec<(ExtElement, Vec<usize>)> = Vec::new();
        for (gi, g) in all.iter().enumerate() {
            if assigned[gi] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = parabolic
                .iter()
                .map(|h| {
                    all.get_index_of(&ext.multiply(h, g))
                        .expect("R is closed under multiplication")
                })
                .collect();
            for &mi in &members {
                assigned[mi] = cosets.len();
            }
            let rep = members
                .iter()
                .map(|&mi| &all[mi])
                .min()
                .expect("cosets are non-empty")
                .clone();
            cosets.push((rep, members));
        }
        // Re-index by representative so ids do not depend on discovery order.
        let mut order: Vec<usize> = (0..cosets.len()).collect();
        order.sort_by(|&a, &b| cosets[a].0.cmp(&cosets[b].0));
        let mut new_index = vec![0; cosets.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut slots: Vec<Option<(ExtElement, Vec<usize>)>> =
            cosets.into_iter().map(Some).collect();
        faces[rank] = order
            .iter()
            .enumerate()
            .map(|(index, &old)| {
                let (rep, members) = slots[old].take().expect("each coset used once");
                Face {
                    rank: rank as u8,
                    index,
                    rep,
                    members,
                }
            })
            .collect();
        face_of[rank] = assigned.into_iter().map(|c| new_index[c]).collect();
    }

    let mut incidences = BTreeSet::new();
    let mut flags = HashSet::new();
    for ((&f0, &f1), &f2) in face_of[0].iter().zip(&face_of[1]).zip(&face_of[2]) {
        let f = [f0, f1, f2];
        incidences.insert(((0u8, f[0]), (1u8, f[1])));
        incidences.insert(((1u8, f[1]), (2u8, f[2])));
        incidences.insert(((0u8, f[0]), (2u8, f[2])));
        flags.insert(f);
    }

    Ok(FaceLattice {
        p: params.p(),
        e: params.e(),
        r: params.r(),
        m: params.m(),
        schlafli: schlafli_type(ext, gens),
        elements: all.into_iter().collect(),
        faces,
        face_of,
        incidences,
        flags: flags.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(PolytopeError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct ParamsJson {
    p: u64,
    e: u32,
    r: u64,
    m: u64,
}

#[derive(Serialize)]
struct FaceJson<'a> {
    rank: u8,
    id: String,
    rep: &'a ExtElement,
}

#[derive(Serialize)]
struct LatticeJson<'a> {
    params: ParamsJson,
    group_order: usize,
    schlafli: [u64; 2],
    counts: Counts,
    euler: i64,
    faces: Vec<FaceJson<'a>>,
    incidences: Vec<[String; 2]>,
}

pub fn export_lattice(lattice: &FaceLattice, format: &str) -> Result<Vec<u8>, PolytopeError> {
    match format.parse::<ExportFormat>()? {
        ExportFormat::Json => Ok(to_json(lattice).into_bytes()),
        ExportFormat::Dot => Ok(to_dot(lattice).into_bytes()),
    }
}

pub fn to_json(lattice: &FaceLattice) -> String {
    let doc = LatticeJson {
        params: ParamsJson {
            p: lattice.p,
            e: lattice.e,
            r: lattice.r,
            m: lattice.m,
        },
        group_order: lattice.elements.len(),
        schlafli: [lattice.schlafli.0, lattice.schlafli.1],
        counts: lattice.counts(),
        euler: lattice.euler(),
        faces: lattice
            .faces
            .iter()
            .flatten()
            .map(|f| FaceJson {
                rank: f.rank,
                id: f.id(),
                rep: &f.rep,
            })
            .collect(),
        incidences: lattice
            .incidences
            .iter()
            .map(|&(a, b)| [face_id(a.0, a.1), face_id(b.0, b.1)])
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("lattice serializes");
    s.push('\n');
    s
}

/// Hasse diagram: one layer per rank, edges between consecutive ranks only.
pub fn to_dot(lattice: &FaceLattice) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "graph hasse_p{}_e{}_r{} {{",
        lattice.p, lattice.e, lattice.r
    );
    s.push_str("  rankdir=BT;\n  node [shape=point];\n");
    for (rank, faces) in lattice.faces.iter().enumerate() {
        let _ = writeln!(s, "  subgraph rank{rank} {{");
        s.push_str("    rank=same;\n");
        for f in faces {
            let _ = writeln!(s, "    {};", f.id());
        }
        s.push_str("  }\n");
    }
    for &(a, b) in &lattice.incidences {
        if b.0 == a.0 + 1 {
            let _ = writeln!(s, "  {} -- {};", face_id(a.0, a.1), face_id(b.0, b.1));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgroup::build_generators;
    use crate::pgroup::Group;

    fn lattice(p: u64, e: u32, r: u64) -> FaceLattice {
        let ext = Extension::new(Group::new(GroupParams::new(p, e, r).unwrap()));
        let gens = build_generators(&ext);
        build_lattice(&ext, &gens, 400_000).unwrap()
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn smallest_instance_counts() {
        let l = lattice(3, 1, 2);
        let c = l.counts();
        assert_eq!(
            (c.vertices, c.edges, c.faces, c.flags),
            (n(9), n(27), n(18), n(108))
        );
        assert_eq!(l.euler(), 0);
        assert!(l.check_diamond());
        assert!(l.is_connected());
        assert_eq!(l.uniform_degrees(), Some((6, 3)));
        assert_eq!(l.schlafli, (3, 6));
    }

    #[test]
    fn closed_forms() {
        let params = GroupParams::new(3, 2, 1).unwrap();
        let c = closed_form_counts(&params);
        assert_eq!((c.vertices, c.edges, c.faces), (n(27), n(81), n(54)));
        let params = GroupParams::new(5, 1, 2).unwrap();
        let c = closed_form_counts(&params);
        assert_eq!((c.vertices, c.edges, c.faces), (n(25), n(125), n(50)));
        assert_eq!(euler_characteristic(&params), BigInt::from(-50));
        assert_eq!(
            euler_characteristic(&GroupParams::new(3, 2, 2).unwrap()),
            BigInt::from(0)
        );
    }

    #[test]
    fn enumeration_matches_closed_form() {
        for (p, e, r) in [(3, 2, 1), (5, 1, 2), (7, 1, 2)] {
            let l = lattice(p, e, r);
            let params = GroupParams::new(p, e, r).unwrap();
            assert_eq!(l.counts(), closed_form_counts(&params));
            assert_eq!(BigInt::from(l.euler()), euler_characteristic(&params));
            assert_eq!(l.uniform_degrees(), Some((2 * p as usize, p as usize)));
        }
    }

    #[test]
    fn every_element_gives_one_flag() {
        let l = lattice(5, 1, 2);
        let mut seen = HashSet::new();
        for gi in 0..l.elements().len() {
            assert!(seen.insert((l.face_of(0, gi), l.face_of(1, gi), l.face_of(2, gi))));
        }
        assert_eq!(l.flag_count(), 500);
    }

    #[test]
    fn json_export() {
        let l = lattice(3, 1, 2);
        let bytes = export_lattice(&l, "json").unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["counts"]["vertices"], 9);
        assert_eq!(v["counts"]["edges"], 27);
        assert_eq!(v["counts"]["faces"], 18);
        assert_eq!(v["counts"]["flags"], 108);
        assert_eq!(v["schlafli"], serde_json::json!([3, 6]));
        assert_eq!(v["euler"], 0);
        assert_eq!(v["faces"].as_array().unwrap().len(), 54);
        // vertex-edge 2E, edge-face 2E, vertex-face pF
        assert_eq!(v["incidences"].as_array().unwrap().len(), 54 + 54 + 54);
        let text = String::from_utf8(bytes).unwrap();
        let positions: Vec<usize> = [
            "params",
            "group_order",
            "schlafli",
            "counts",
            "euler",
            "faces",
            "incidences",
        ]
        .iter()
        .map(|k| text.find(&format!("\n  \"{k}\":")).unwrap())
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    }

    #[test]
    fn json_is_deterministic() {
        let a = to_json(&lattice(3, 2, 1));
        let b = to_json(&lattice(3, 2, 1));
        assert_eq!(a, b);
    }

    #[test]
    fn dot_export() {
        let l = lattice(3, 1, 2);
        let dot = String::from_utf8(export_lattice(&l, "dot").unwrap()).unwrap();
        let nodes = dot
            .lines()
            .filter(|line| {
                let t = line.trim();
                t.starts_with('r') && t.ends_with(';') && !t.contains("--") && !t.contains('=')
            })
            .count();
        assert_eq!(nodes, 54);
        let edges = dot.lines().filter(|line| line.contains("--")).count();
        assert_eq!(edges, 108);
    }

    #[test]
    fn unsupported_format() {
        let l = lattice(3, 1, 2);
        assert_eq!(
            export_lattice(&l, "text"),
            Err(PolytopeError::UnsupportedFormat("text".into()))
        );
    }

    #[test]
    fn over_cap_reports_closed_forms() {
        let ext = Extension::new(Group::new(GroupParams::new(3, 2, 2).unwrap()));
        let gens = build_generators(&ext);
        match build_lattice(&ext, &gens, 100) {
            Err(PolytopeError::CapExceeded { counts, euler, .. }) => {
                assert_eq!(counts.vertices, n(81));
                assert_eq!(euler, BigInt::from(0));
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }
}
