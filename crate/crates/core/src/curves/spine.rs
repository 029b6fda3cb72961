//! Trivalent spine of a marked sphere.
//!
//! The dual graph `D` of the triangulation has one node per triangle and one
//! half-edge `3t + k` per directed edge `(v_k, v_{k+1})` of triangle `t`,
//! crossing that edge out of `t`. Its faces are the vertices of the
//! triangulation. Merging every unmarked face into a marked neighbour,
//! pruning leaves and smoothing bivalent nodes yields a ribbon graph `G`
//! whose faces are exactly the marked points. Dual nodes have valence three,
//! so `G` is trivalent once at least three points are marked. `G` is a
//! deformation retract of the punctured sphere, so free homotopy classes of
//! curves are cyclically reduced words in `G`.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::surface::Triangulation;
use crate::words::{self, cyclic_reduce, reduce_with};

/// Dual half-edge crossing the directed edge `a -> b` out of the triangle
/// on its left.
pub fn dual_half_edge(tri: &Triangulation, a: usize, b: usize) -> usize {
    let t = tri.triangle_left_of(a, b).expect("edge exists");
    let tv = tri.triangles()[t];
    let k = (0..3).find(|&k| tv[k] == a && tv[(k + 1) % 3] == b).unwrap();
    3 * t + k
}

/// The directed edge crossed by a dual half-edge.
pub fn dual_edge(tri: &Triangulation, h: usize) -> (usize, usize) {
    let tv = tri.triangles()[h / 3];
    (tv[h % 3], tv[(h % 3 + 1) % 3])
}

pub fn dual_twin(tri: &Triangulation, h: usize) -> usize {
    let (a, b) = dual_edge(tri, h);
    dual_half_edge(tri, b, a)
}

/// Face on the left of a dual half-edge.
pub fn dual_left_face(tri: &Triangulation, h: usize) -> usize {
    dual_edge(tri, h).1
}

/// Counterclockwise loop of dual half-edges around vertex `v`.
pub fn dual_vertex_loop(tri: &Triangulation, v: usize) -> Vec<usize> {
    tri.star(v)
        .into_iter()
        .map(|t| {
            let [_, _, y] = tri.rotated_at(t, v);
            dual_half_edge(tri, y, v)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Spine {
    tri: Triangulation,
    marked: Vec<usize>,
    d_twin: Vec<usize>,
    /// Image of each dual half-edge as a word in `G`.
    d_image: Vec<Vec<usize>>,
    node_count: usize,
    origin: Vec<usize>,
    sigma: Vec<usize>,
    /// Dual walk realizing each spine half-edge.
    realize: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    chain: OnceLock<Vec<crate::curves::Curve>>,
    generators: OnceLock<Vec<crate::curves::Curve>>,
}

impl Spine {
    pub fn new(tri: &Triangulation, marked: &[usize]) -> Spine {
        let nd = 3 * tri.triangle_count();
        let d_twin: Vec<usize> = (0..nd).map(|h| dual_twin(tri, h)).collect();
        let mut sig: Vec<usize> = (0..nd).map(|h| 3 * (h / 3) + (h % 3 + 1) % 3).collect();
        let mut sig_inv: Vec<usize> = (0..nd).map(|h| 3 * (h / 3) + (h % 3 + 2) % 3).collect();
        let mut alive = vec![true; nd];
        let mut deg = vec![3usize; tri.triangle_count()];
        let mut subst: Vec<Option<Vec<usize>>> = vec![None; nd];
        let mut deleted: Vec<usize> = Vec::new();

        let remove = |h: usize,
                      sig: &mut Vec<usize>,
                      sig_inv: &mut Vec<usize>,
                      alive: &mut Vec<bool>,
                      deg: &mut Vec<usize>| {
            let (p, n) = (sig_inv[h], sig[h]);
            sig[p] = n;
            sig_inv[n] = p;
            alive[h] = false;
            deg[h / 3] -= 1;
        };

        // Breadth-first forest rooted at the marked vertices.
        let nv = tri.vertex_count();
        let mut par = vec![usize::MAX; nv];
        let mut seen = vec![false; nv];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in marked {
            seen[q] = true;
            queue.push_back(q);
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb = tri.link(v);
            nb.sort_unstable();
            for w in nb {
                if !seen[w] {
                    seen[w] = true;
                    par[w] = v;
                    queue.push_back(w);
                }
            }
        }

        // Merge unmarked faces, leaves first.
        for &b in order.iter().rev() {
            if par[b] == usize::MAX {
                continue;
            }
            let a = par[b];
            let h = dual_half_edge(tri, a, b);
            let phi = |x: usize, sig_inv: &Vec<usize>| sig_inv[d_twin[x]];
            let mut path = Vec::new();
            let mut x = phi(h, &sig_inv);
            while x != h {
                path.push(x);
                x = phi(x, &sig_inv);
            }
            subst[h] = Some(words::inverse_with(&path, |y| d_twin[y]));
            subst[d_twin[h]] = Some(path);
            remove(h, &mut sig, &mut sig_inv, &mut alive, &mut deg);
            remove(d_twin[h], &mut sig, &mut sig_inv, &mut alive, &mut deg);
            deleted.push(h);
        }

        // Prune leaves.
        let mut leaves: Vec<usize> = (0..deg.len()).filter(|&u| deg[u] == 1).collect();
        while let Some(u) = leaves.pop() {
            if deg[u] != 1 {
                continue;
            }
            let h = (3 * u..3 * u + 3).find(|&h| alive[h]).unwrap();
            let t = d_twin[h];
            subst[h] = Some(Vec::new());
            subst[t] = Some(Vec::new());
            remove(h, &mut sig, &mut sig_inv, &mut alive, &mut deg);
            remove(t, &mut sig, &mut sig_inv, &mut alive, &mut deg);
            deleted.push(h);
            if deg[t / 3] == 1 {
                leaves.push(t / 3);
            }
        }

        // Surviving nodes of valence three; a lone cycle keeps one node.
        let mut is_node: Vec<bool> = deg.iter().map(|&d| d >= 3).collect();
        if !is_node.iter().any(|&b| b) {
            if let Some(u) = deg.iter().position(|&d| d == 2) {
                is_node[u] = true;
            }
        }

        // Smooth bivalent chains into single edges.
        let mut d_image: Vec<Vec<usize>> = vec![Vec::new(); nd];
        let mut start_of: Vec<Option<usize>> = vec![None; nd];
        let mut assigned = vec![false; nd];
        let mut realize: Vec<Vec<usize>> = Vec::new();
        for u in 0..deg.len() {
            if !is_node[u] {
                continue;
            }
            for h in 3 * u..3 * u + 3 {
                if !alive[h] || assigned[h] {
                    continue;
                }
                let mut chain = vec![h];
                let mut cur = h;
                while !is_node[d_twin[cur] / 3] {
                    cur = sig[d_twin[cur]];
                    chain.push(cur);
                }
                let e = realize.len();
                let last = *chain.last().unwrap();
                d_image[h] = vec![e];
                d_image[d_twin[h]] = vec![e + 1];
                start_of[h] = Some(e);
                start_of[d_twin[last]] = Some(e + 1);
                for &c in &chain {
                    assigned[c] = true;
                    assigned[d_twin[c]] = true;
                }
                let back = words::inverse_with(&chain, |y| d_twin[y]);
                realize.push(chain);
                realize.push(back);
            }
        }

        // Images of deleted half-edges, latest deletion first.
        for &h in deleted.iter().rev() {
            for x in [h, d_twin[h]] {
                let mut w = Vec::new();
                for &p in subst[x].as_ref().unwrap() {
                    w.extend_from_slice(&d_image[p]);
                }
                d_image[x] = reduce_with(&w, words::twin);
            }
        }

        // Rotation at each remaining node, read off the dual rotation.
        let ne = realize.len();
        let mut origin = vec![0usize; ne];
        let mut sigma = vec![0usize; ne];
        let mut node_count = 0;
        for u in 0..deg.len() {
            if !is_node[u] {
                continue;
            }
            let first = (3 * u..3 * u + 3).find(|&h| alive[h]).unwrap();
            let mut rot = vec![start_of[first].unwrap()];
            let mut x = sig[first];
            while x != first {
                rot.push(start_of[x].unwrap());
                x = sig[x];
            }
            for i in 0..rot.len() {
                origin[rot[i]] = node_count;
                sigma[rot[i]] = rot[(i + 1) % rot.len()];
            }
            node_count += 1;
        }

        let mut sp = Spine {
            tri: tri.clone(),
            marked: marked.to_vec(),
            d_twin,
            d_image,
            node_count,
            origin,
            sigma,
            realize,
            faces: Vec::new(),
            chain: OnceLock::new(),
            generators: OnceLock::new(),
        };
        sp.faces = marked
            .iter()
            .map(|&q| sp.dual_loop_to_word(&dual_vertex_loop(tri, q)))
            .collect();
        sp
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn half_edge_count(&self) -> usize {
        self.origin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    pub fn target(&self, h: usize) -> usize {
        self.origin[h ^ 1]
    }

    /// Counterclockwise successor of `h` around its origin.
    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    pub fn sigma_inv(&self, h: usize) -> usize {
        let mut x = h;
        loop {
            let n = self.sigma[x];
            if n == h {
                return x;
            }
            x = n;
        }
    }

    /// Half-edges around node `u`, counterclockwise.
    pub fn rotation(&self, u: usize) -> Vec<usize> {
        let first = (0..self.origin.len()).find(|&h| self.origin[h] == u).unwrap();
        let mut out = vec![first];
        let mut x = self.sigma[first];
        while x != first {
            out.push(x);
            x = self.sigma[x];
        }
        out
    }

    /// Face boundary word of the `i`-th marked point, counterclockwise.
    pub fn face(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Faces of `G` as orbits of `h -> sigma^{-1}(twin h)`.
    pub fn face_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.origin.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for h in 0..n {
            if seen[h] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x);
                x = self.sigma_inv(x ^ 1);
            }
            out.push(orbit);
        }
        out
    }

    pub(crate) fn chain_cache(&self) -> &OnceLock<Vec<crate::curves::Curve>> {
        &self.chain
    }

    pub(crate) fn generator_cache(&self) -> &OnceLock<Vec<crate::curves::Curve>> {
        &self.generators
    }

    pub fn dual_twin(&self, h: usize) -> usize {
        self.d_twin[h]
    }

    /// Map a closed dual walk to a cyclically reduced word in `G`.
    pub fn dual_loop_to_word(&self, walk: &[usize]) -> Vec<usize> {
        let mut w = Vec::new();
        for &h in walk {
            w.extend_from_slice(&self.d_image[h]);
        }
        cyclic_reduce(&w)
    }

    /// Realize a closed word of `G` as a closed dual walk.
    pub fn realize_loop(&self, w: &[usize]) -> Vec<usize> {
        w.iter().flat_map(|&h| self.realize[h].iter().copied()).collect()
    }

    /// Dual walk of a single spine half-edge.
    pub fn realize_half_edge(&self, h: usize) -> &[usize] {
        &self.realize[h]
    }
}
