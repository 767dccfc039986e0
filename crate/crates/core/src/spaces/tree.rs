//! Weighted metric trees.
//!
//! Points live on edges as `(edge index, offset from the edge's first
//! endpoint)`. A vertex can be described on any incident edge; all routines
//! compare points metrically, so representation never matters. Geodesics walk
//! the unique vertex path between two points. Geodesic extension continues
//! through a vertex into the incident edge with the smallest index other than
//! the arrival edge, and fails at leaves.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

/// A point on a tree: position `offset` along edge `edge`, measured from the
/// edge's first endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreePt {
    pub edge: usize,
    pub offset: f64,
}

/// Builder-facing description of a weighted tree.
#[derive(Clone, Debug, Default)]
pub struct TreeSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, f64)>,
}

impl TreeSpec {
    pub fn new<S: Into<String>>(vertices: Vec<S>, edges: Vec<(S, S, f64)>) -> Self {
        TreeSpec {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(u, v, l)| (u.into(), v.into(), l))
                .collect(),
        }
    }

    /// Parse the plain-text tree format.
    ///
    /// One directive per line: `vertex <name>` or `edge <u> <v> <length>`,
    /// with `#` starting a comment. Vertices must be declared before any edge
    /// that references them. Errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<TreeSpec> {
        let mut spec = TreeSpec::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let mut tokens = content.split_whitespace();
            let Some(head) = tokens.next() else {
                continue;
            };
            match head {
                "vertex" => {
                    let Some(name) = tokens.next() else {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "vertex directive needs a name".to_string(),
                        });
                    };
                    if tokens.next().is_some() {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "vertex directive takes exactly one name".to_string(),
                        });
                    }
                    if spec.vertices.iter().any(|v| v == name) {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: alloc::format!("duplicate vertex name `{name}`"),
                        });
                    }
                    spec.vertices.push(name.to_string());
                }
                "edge" => {
                    let (Some(u), Some(v), Some(len_tok)) =
                        (tokens.next(), tokens.next(), tokens.next())
                    else {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "edge directive needs `edge <u> <v> <length>`".to_string(),
                        });
                    };
                    if tokens.next().is_some() {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "edge directive takes exactly three arguments".to_string(),
                        });
                    }
                    for name in [u, v] {
                        if !spec.vertices.iter().any(|x| x == name) {
                            return Err(Error::InvalidSpec {
                                line,
                                msg: alloc::format!("edge references undeclared vertex `{name}`"),
                            });
                        }
                    }
                    let len: f64 = len_tok.parse().map_err(|_| Error::InvalidSpec {
                        line,
                        msg: alloc::format!("cannot parse edge length `{len_tok}`"),
                    })?;
                    if !(len.is_finite() && len > 0.0) {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "edge length must be finite and positive".to_string(),
                        });
                    }
                    if u == v {
                        return Err(Error::InvalidSpec {
                            line,
                            msg: "edge endpoints must differ".to_string(),
                        });
                    }
                    spec.edges.push((u.to_string(), v.to_string(), len));
                }
                other => {
                    return Err(Error::InvalidSpec {
                        line,
                        msg: alloc::format!("unknown directive `{other}`"),
                    });
                }
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
}

/// The initial direction of a geodesic leaving a point: along `edge`, moving
/// toward its second endpoint iff `toward_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Departure {
    pub edge: usize,
    pub toward_v: bool,
}

/// Where a tree point sits once exact edge-endpoint hits are resolved.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Loc {
    Vertex(usize),
    Interior,
}

/// A validated weighted tree with precomputed routing tables.
#[derive(Clone, Debug)]
pub struct Tree {
    names: Vec<String>,
    edges: Vec<Edge>,
    /// Incident edge indices per vertex, ascending.
    adj: Vec<Vec<usize>>,
    /// Pairwise vertex distances.
    vdist: Vec<Vec<f64>>,
    /// `next_hop[s][t]` is the neighbor of `s` on the path to `t`.
    next_hop: Vec<Vec<usize>>,
    total_len: f64,
}

impl Tree {
    pub fn build(spec: &TreeSpec) -> Result<Tree> {
        let n = spec.vertices.len();
        if n < 2 {
            return Err(Error::InvalidSpace(
                "a metric tree needs at least two vertices".to_string(),
            ));
        }
        let mut names = Vec::with_capacity(n);
        for name in &spec.vertices {
            if name.is_empty() {
                return Err(Error::InvalidSpace("empty vertex name".to_string()));
            }
            if names.contains(name) {
                return Err(Error::InvalidSpace(alloc::format!(
                    "duplicate vertex name `{name}`"
                )));
            }
            names.push(name.clone());
        }
        let index_of = |name: &str| names.iter().position(|x| x == name);
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (u, v, len) in &spec.edges {
            let (Some(ui), Some(vi)) = (index_of(u), index_of(v)) else {
                return Err(Error::InvalidSpace(alloc::format!(
                    "edge references unknown vertex `{u}` or `{v}`"
                )));
            };
            if ui == vi {
                return Err(Error::InvalidSpace("self-loop edge".to_string()));
            }
            if !(len.is_finite() && *len > 0.0) {
                return Err(Error::InvalidSpace(
                    "edge length must be finite and positive".to_string(),
                ));
            }
            edges.push(Edge {
                u: ui,
                v: vi,
                len: *len,
            });
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidSpace(alloc::format!(
                "a tree on {n} vertices needs exactly {} edges, found {}",
                n - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (ei, e) in edges.iter().enumerate() {
            adj[e.u].push(ei);
            adj[e.v].push(ei);
        }
        // Edge indices are pushed in ascending order already, but make the
        // invariant explicit since extension depends on it.
        for list in &mut adj {
            list.sort_unstable();
        }
        // BFS from every vertex: connectivity, distances, and routing.
        let mut vdist = vec![vec![0.0; n]; n];
        let mut next_hop = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut queue = alloc::collections::VecDeque::new();
            seen[s] = true;
            next_hop[s][s] = s;
            queue.push_back(s);
            let mut reached = 1usize;
            while let Some(w) = queue.pop_front() {
                for &ei in &adj[w] {
                    let e = &edges[ei];
                    let other = if e.u == w { e.v } else { e.u };
                    if seen[other] {
                        continue;
                    }
                    seen[other] = true;
                    reached += 1;
                    vdist[s][other] = vdist[s][w] + e.len;
                    next_hop[s][other] = if w == s { other } else { next_hop[s][w] };
                    queue.push_back(other);
                }
            }
            if reached != n {
                return Err(Error::InvalidSpace("tree is not connected".to_string()));
            }
        }
        let total_len = edges.iter().map(|e| e.len).sum();
        Ok(Tree {
            names,
            edges,
            adj,
            vdist,
            next_hop,
            total_len,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn edge_length(&self, edge: usize) -> Option<f64> {
        self.edges.get(edge).map(|e| e.len)
    }

    pub fn edge_endpoints(&self, edge: usize) -> Option<(usize, usize)> {
        self.edges.get(edge).map(|e| (e.u, e.v))
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.adj[vertex].len()
    }

    /// Path-length distance between two vertices, from the precomputed
    /// all-pairs table.
    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.vdist[a][b]
    }

    /// Canonical representation of a vertex: sitting on its smallest incident
    /// edge at the matching endpoint offset.
    pub fn vertex_point(&self, vertex: usize) -> TreePt {
        let ei = self.adj[vertex][0];
        let e = &self.edges[ei];
        let offset = if e.u == vertex { 0.0 } else { e.len };
        TreePt { edge: ei, offset }
    }

    pub fn validate(&self, p: &TreePt) -> Result<()> {
        let Some(e) = self.edges.get(p.edge) else {
            return Err(Error::InvalidSpace(alloc::format!(
                "edge index {} out of range",
                p.edge
            )));
        };
        if !(p.offset.is_finite() && p.offset >= 0.0 && p.offset <= e.len) {
            return Err(Error::InvalidSpace(alloc::format!(
                "offset {} outside [0, {}]",
                p.offset,
                e.len
            )));
        }
        Ok(())
    }

    pub(crate) fn locate(&self, p: &TreePt) -> Loc {
        let e = &self.edges[p.edge];
        if p.offset == 0.0 {
            Loc::Vertex(e.u)
        } else if p.offset == e.len {
            Loc::Vertex(e.v)
        } else {
            Loc::Interior
        }
    }

    /// Distance from `p` to the given endpoint of its own edge.
    fn offset_to_endpoint(&self, p: &TreePt, endpoint: usize) -> f64 {
        let e = &self.edges[p.edge];
        if endpoint == e.u {
            p.offset
        } else {
            debug_assert_eq!(endpoint, e.v);
            e.len - p.offset
        }
    }

    /// For points on distinct edges: the total distance together with the
    /// exit endpoint of `p`'s edge and the entry endpoint of `q`'s edge.
    fn route(&self, p: &TreePt, q: &TreePt) -> (f64, usize, usize) {
        debug_assert_ne!(p.edge, q.edge);
        let pe = &self.edges[p.edge];
        let qe = &self.edges[q.edge];
        let mut best = (f64::INFINITY, pe.u, qe.u);
        for &a in &[pe.u, pe.v] {
            for &b in &[qe.u, qe.v] {
                let d = self.offset_to_endpoint(p, a) + self.vdist[a][b]
                    + self.offset_to_endpoint(q, b);
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        best
    }

    pub fn distance(&self, p: &TreePt, q: &TreePt) -> f64 {
        if p.edge == q.edge {
            (p.offset - q.offset).abs()
        } else {
            self.route(p, q).0
        }
    }

    /// Point at parameter `t` (in [0, 1]) along the geodesic from `p` to `q`.
    pub fn geodesic(&self, p: &TreePt, q: &TreePt, t: f64) -> TreePt {
        if p.edge == q.edge {
            return TreePt {
                edge: p.edge,
                offset: p.offset + (q.offset - p.offset) * t,
            };
        }
        let (d, a, b) = self.route(p, q);
        if d == 0.0 {
            return *p;
        }
        let mut remaining = t * d;
        // Leg 1: along p's edge to the exit endpoint.
        let first_leg = self.offset_to_endpoint(p, a);
        if remaining <= first_leg {
            let e = &self.edges[p.edge];
            let offset = if a == e.u {
                p.offset - remaining
            } else {
                p.offset + remaining
            };
            return TreePt {
                edge: p.edge,
                offset: offset.clamp(0.0, e.len),
            };
        }
        remaining -= first_leg;
        // Leg 2: vertex chain from a to b.
        let mut cur = a;
        while cur != b {
            let nxt = self.next_hop[cur][b];
            let ei = self.edge_between(cur, nxt);
            let e = &self.edges[ei];
            if remaining <= e.len {
                let offset = if cur == e.u {
                    remaining
                } else {
                    e.len - remaining
                };
                return TreePt {
                    edge: ei,
                    offset: offset.clamp(0.0, e.len),
                };
            }
            remaining -= e.len;
            cur = nxt;
        }
        // Leg 3: into q's edge from b toward q.
        let e = &self.edges[q.edge];
        let offset = if b == e.u {
            remaining
        } else {
            e.len - remaining
        };
        TreePt {
            edge: q.edge,
            offset: offset.clamp(0.0, e.len),
        }
    }

    fn edge_between(&self, a: usize, b: usize) -> usize {
        for &ei in &self.adj[a] {
            let e = &self.edges[ei];
            if e.u == b || e.v == b {
                return ei;
            }
        }
        unreachable!("next_hop always names a neighbor")
    }

    /// Initial direction of the geodesic from `p` toward `q`.
    /// Requires distance(p, q) > 0.
    pub(crate) fn departure(&self, p: &TreePt, q: &TreePt) -> Departure {
        if p.edge == q.edge {
            return Departure {
                edge: p.edge,
                toward_v: q.offset > p.offset,
            };
        }
        let (_, a, b) = self.route(p, q);
        let exit_leg = self.offset_to_endpoint(p, a);
        if exit_leg > 0.0 {
            let e = &self.edges[p.edge];
            return Departure {
                edge: p.edge,
                toward_v: a == e.v,
            };
        }
        // p sits exactly at vertex a: depart along the path toward b, or
        // straight into q's edge when a == b.
        if a == b {
            let e = &self.edges[q.edge];
            return Departure {
                edge: q.edge,
                toward_v: a == e.u,
            };
        }
        let nxt = self.next_hop[a][b];
        let ei = self.edge_between(a, nxt);
        let e = &self.edges[ei];
        Departure {
            edge: ei,
            toward_v: a == e.u,
        }
    }

    /// Walk `dist` from `p` in direction `dep`, continuing through every
    /// vertex into its smallest incident edge other than the arrival edge.
    /// Fails with `NoExtension` when the walk would have to pass a leaf.
    pub(crate) fn walk(&self, p: &TreePt, dep: Departure, dist: f64) -> Result<TreePt> {
        debug_assert!(dist >= 0.0 && dist.is_finite());
        let mut edge = dep.edge;
        let mut offset = if dep.edge == p.edge {
            p.offset
        } else {
            // Departing from a vertex of p's edge into another edge.
            let e = &self.edges[dep.edge];
            if dep.toward_v {
                0.0
            } else {
                e.len
            }
        };
        let mut toward_v = dep.toward_v;
        let mut budget = dist;
        loop {
            let e = &self.edges[edge];
            let cap = if toward_v { e.len - offset } else { offset };
            if budget <= cap {
                let final_offset = if toward_v {
                    offset + budget
                } else {
                    offset - budget
                };
                return Ok(TreePt {
                    edge,
                    offset: final_offset.clamp(0.0, e.len),
                });
            }
            budget -= cap;
            let w = if toward_v { e.v } else { e.u };
            let mut next = None;
            for &ei in &self.adj[w] {
                if ei != edge {
                    next = Some(ei);
                    break;
                }
            }
            let Some(ei) = next else {
                return Err(Error::NoExtension);
            };
            let ne = &self.edges[ei];
            edge = ei;
            if ne.u == w {
                offset = 0.0;
                toward_v = true;
            } else {
                offset = ne.len;
                toward_v = false;
            }
        }
    }

    /// Extend the geodesic through `x` away from `p` by `extra`, or behind
    /// `p` away from `x` when called with the roles swapped.
    pub(crate) fn continue_past(&self, p: &TreePt, x: &TreePt, extra: f64) -> Result<TreePt> {
        if extra == 0.0 {
            return Ok(*x);
        }
        match self.locate(x) {
            Loc::Interior => {
                // Any geodesic reaching interior x arrives along x's edge;
                // continue straight, reversing the direction toward p.
                let toward_p = self.departure(x, p);
                debug_assert_eq!(toward_p.edge, x.edge);
                let dep = Departure {
                    edge: x.edge,
                    toward_v: !toward_p.toward_v,
                };
                self.walk(x, dep, extra)
            }
            Loc::Vertex(w) => {
                if self.adj[w].len() == 1 {
                    return Err(Error::NoExtension);
                }
                let arrival = self.departure(x, p).edge;
                let mut next = None;
                for &ei in &self.adj[w] {
                    if ei != arrival {
                        next = Some(ei);
                        break;
                    }
                }
                let Some(ei) = next else {
                    return Err(Error::NoExtension);
                };
                let e = &self.edges[ei];
                let dep = Departure {
                    edge: ei,
                    toward_v: e.u == w,
                };
                let start = TreePt {
                    edge: ei,
                    offset: if e.u == w { 0.0 } else { e.len },
                };
                self.walk(&start, dep, extra)
            }
        }
    }

    /// Cosine of the Alexandrov angle at `p` between directions toward `x`
    /// and `y`: 1 when the geodesics leave together, -1 otherwise.
    pub(crate) fn cos_angle(&self, p: &TreePt, x: &TreePt, y: &TreePt) -> f64 {
        if self.departure(p, x) == self.departure(p, y) {
            1.0
        } else {
            -1.0
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TreePt {
        let target = rng.gen::<f64>() * self.total_len;
        let mut acc = 0.0;
        for (ei, e) in self.edges.iter().enumerate() {
            if target <= acc + e.len || ei == self.edges.len() - 1 {
                let offset = (target - acc).clamp(0.0, e.len);
                return TreePt { edge: ei, offset };
            }
            acc += e.len;
        }
        unreachable!("edge list is nonempty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_leg() -> Tree {
        // root -a-> a (length 1), root -b-> b (length 2)
        let spec = TreeSpec::new(
            vec!["root", "a", "b"],
            vec![("root", "a", 1.0), ("root", "b", 2.0)],
        );
        Tree::build(&spec).unwrap()
    }

    fn tripod() -> Tree {
        let spec = TreeSpec::new(
            vec!["o", "a", "b", "c"],
            vec![("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)],
        );
        Tree::build(&spec).unwrap()
    }

    #[test]
    fn leg_path_distance_is_sum_of_legs() {
        let t = two_leg();
        let a = t.vertex_point(t.vertex_index("a").unwrap());
        let b = t.vertex_point(t.vertex_index("b").unwrap());
        assert_eq!(t.distance(&a, &b), 3.0);
        let root = t.vertex_point(t.vertex_index("root").unwrap());
        assert_eq!(t.distance(&a, &root), 1.0);
        assert_eq!(t.distance(&root, &b), 2.0);
    }

    #[test]
    fn geodesic_passes_branch_vertex() {
        let t = two_leg();
        let a = t.vertex_point(t.vertex_index("a").unwrap());
        let b = t.vertex_point(t.vertex_index("b").unwrap());
        let root = t.vertex_point(t.vertex_index("root").unwrap());
        let m = t.geodesic(&a, &b, 1.0 / 3.0);
        assert!(t.distance(&m, &root) < 1e-10);
        let q = t.geodesic(&a, &b, 2.0 / 3.0);
        assert!(t.distance(&q, &root) - 1.0 < 1e-12);
        assert_eq!(q.edge, 1);
    }

    #[test]
    fn constant_speed_on_vertex_path() {
        let t = tripod();
        let a = TreePt {
            edge: 0,
            offset: 0.7,
        };
        let c = TreePt {
            edge: 2,
            offset: 0.4,
        };
        let d = t.distance(&a, &c);
        assert!((d - 1.1).abs() < 1e-12);
        for i in 0..=10 {
            let s = i as f64 / 10.0;
            let g = t.geodesic(&a, &c, s);
            assert!((t.distance(&a, &g) - s * d).abs() < 1e-12);
        }
    }

    #[test]
    fn departures_separate_legs() {
        let t = tripod();
        let o = t.vertex_point(0);
        let a = t.vertex_point(1);
        let b = t.vertex_point(2);
        assert_eq!(t.cos_angle(&o, &a, &b), -1.0);
        let half_a = TreePt {
            edge: 0,
            offset: 0.5,
        };
        assert_eq!(t.cos_angle(&o, &a, &half_a), 1.0);
    }

    #[test]
    fn walk_extends_into_smallest_edge() {
        let t = tripod();
        // From leg a (edge 0) through the branch: smallest other edge is 1.
        let a = TreePt {
            edge: 0,
            offset: 0.9,
        };
        let o = t.vertex_point(0);
        let ext = t.continue_past(&a, &o, 0.25).unwrap();
        assert_eq!(ext.edge, 1);
        assert!((ext.offset - 0.25).abs() < 1e-12);
    }

    #[test]
    fn extension_fails_at_leaf() {
        let t = tripod();
        let o = t.vertex_point(0);
        let a = t.vertex_point(1);
        assert_eq!(t.continue_past(&o, &o, 0.0).unwrap_or(o), o);
        // Through the branch away from a: continuation enters another leg.
        assert!(t.continue_past(&a, &o, 0.5).is_ok());
        // Past the leaf a itself there is nowhere to go.
        assert!(matches!(t.continue_past(&o, &a, 0.5), Err(Error::NoExtension)));
    }

    #[test]
    fn parse_rejects_bad_input() {
        let ok = TreeSpec::parse("# comment\nvertex r\nvertex a\nedge r a 1.5\n").unwrap();
        assert_eq!(ok.vertices.len(), 2);
        assert_eq!(ok.edges.len(), 1);

        let err = TreeSpec::parse("vertex r\nedge r q 1.0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidSpec { line: 2, .. }));

        let err = TreeSpec::parse("vertex r\nvertex a\nedge r a -1\n").unwrap_err();
        assert!(matches!(err, Error::InvalidSpec { line: 3, .. }));

        let err = TreeSpec::parse("flower r\n").unwrap_err();
        assert!(matches!(err, Error::InvalidSpec { line: 1, .. }));
    }

    #[test]
    fn build_rejects_cycles_and_disconnection() {
        let cyc = TreeSpec::new(
            vec!["a", "b", "c"],
            vec![("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)],
        );
        assert!(matches!(Tree::build(&cyc), Err(Error::InvalidSpace(_))));

        let disc = TreeSpec::new(
            vec!["a", "b", "c", "d"],
            vec![("a", "b", 1.0), ("c", "d", 1.0), ("a", "b", 1.0)],
        );
        assert!(Tree::build(&disc).is_err());
    }
}
