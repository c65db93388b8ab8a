//! Canonical labeling and automorphism search on the multiplicity-labeled
//! simple support of a multigraph.
//!
//! The support collapses each parallel class to one labeled edge. Vertex
//! colors come from iterated neighborhood refinement; a backtracking search
//! over color-respecting orders then minimizes the adjacency certificate.
//! Parallel edges within a class are interchangeable, so they never enter
//! the certificate beyond the class multiplicity.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::multigraph::{EdgeId, MultiGraph};

/// Multiplicity-labeled simple support of a multigraph.
pub(crate) struct Support {
    pub n: usize,
    mult: Vec<u32>,
    /// Distinct neighbors per vertex, ascending.
    pub neighbors: Vec<Vec<u32>>,
    /// Parallel classes: (u, v, edge ids ascending) with u < v.
    pub classes: Vec<(u32, u32, Vec<EdgeId>)>,
}

impl Support {
    pub fn of(g: &MultiGraph) -> Support {
        let n = g.vertex_count();
        let mut mult = vec![0u32; n * n];
        let mut class_map: HashMap<(u32, u32), Vec<EdgeId>> = HashMap::new();
        for e in g.edges() {
            let (u, v) = g.ends(e);
            mult[u.index() * n + v.index()] += 1;
            mult[v.index() * n + u.index()] += 1;
            class_map.entry((u.0, v.0)).or_default().push(e);
        }
        let mut classes: Vec<(u32, u32, Vec<EdgeId>)> = class_map
            .into_iter()
            .map(|((u, v), mut ids)| {
                ids.sort();
                (u, v, ids)
            })
            .collect();
        classes.sort();
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v, _) in &classes {
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        for nb in &mut neighbors {
            nb.sort();
        }
        Support {
            n,
            mult,
            neighbors,
            classes,
        }
    }

    #[inline]
    pub fn mult(&self, u: u32, v: u32) -> u32 {
        self.mult[u as usize * self.n + v as usize]
    }
}

/// A vertex's refinement signature: its color plus the sorted list of
/// (neighbor color, multiplicity) pairs.
type Signature = (u32, Vec<(u32, u32)>);

/// Iterated refinement by (color, sorted neighbor (color, multiplicity) list).
/// Colors are dense ranks of the sorted signatures, so equal structures get
/// equal colors across different graphs.
pub(crate) fn refine_colors(s: &Support) -> Vec<u32> {
    let mut color = vec![0u32; s.n];
    loop {
        let mut sigs: Vec<Signature> = Vec::with_capacity(s.n);
        for v in 0..s.n {
            let mut nb: Vec<(u32, u32)> = s.neighbors[v]
                .iter()
                .map(|&u| (color[u as usize], s.mult(v as u32, u)))
                .collect();
            nb.sort();
            sigs.push((color[v], nb));
        }
        let mut uniq: Vec<&Signature> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let rank: HashMap<&Signature, u32> = uniq
            .iter()
            .enumerate()
            .map(|(i, sig)| (*sig, i as u32))
            .collect();
        let new_color: Vec<u32> = sigs.iter().map(|sig| rank[sig]).collect();
        if new_color == color {
            return color;
        }
        color = new_color;
    }
}

/// Canonical vertex order (position -> vertex) together with the certificate
/// it minimizes. Two multigraphs are isomorphic iff their certificates and
/// vertex counts agree.
pub(crate) fn canonical_order(s: &Support) -> (Vec<u32>, Vec<u32>) {
    let color = refine_colors(s);
    let mut order: Vec<u32> = (0..s.n as u32).collect();
    // Stable bucket order: cells by color, vertices inside a cell are
    // interchangeable candidates for the cell's positions.
    order.sort_by_key(|&v| (color[v as usize], v));
    // Candidates at position i: unused vertices of the color assigned to
    // position i (cells keep their positions across all branches).
    let cell_color: Vec<u32> = order.iter().map(|&v| color[v as usize]).collect();

    let mut search = CanonSearch {
        support: s,
        color,
        cell_color,
        used: vec![false; s.n],
        placed: Vec::with_capacity(s.n),
        cert: Vec::with_capacity(s.n * (s.n + 1) / 2),
        best_cert: None,
        best_order: Vec::new(),
    };
    search.descend(true);
    (search.best_order, search.best_cert.unwrap_or_default())
}

/// Branch-and-bound state for the certificate minimization.
struct CanonSearch<'a> {
    support: &'a Support,
    color: Vec<u32>,
    cell_color: Vec<u32>,
    used: Vec<bool>,
    placed: Vec<u32>,
    cert: Vec<u32>,
    best_cert: Option<Vec<u32>>,
    best_order: Vec<u32>,
}

impl CanonSearch<'_> {
    /// `tied` marks branches whose partial certificate equals the best one
    /// so far; only those may still be pruned.
    fn descend(&mut self, tied: bool) {
        let i = self.placed.len();
        if i == self.support.n {
            if self
                .best_cert
                .as_ref()
                .is_none_or(|best| self.cert < *best)
            {
                self.best_cert = Some(self.cert.clone());
                self.best_order = self.placed.clone();
            }
            return;
        }
        let want = self.cell_color[i];
        for v in 0..self.support.n as u32 {
            if self.used[v as usize] || self.color[v as usize] != want {
                continue;
            }
            let row_start = self.cert.len();
            self.cert.push(want);
            for &p in self.placed.iter() {
                self.cert.push(self.support.mult(v, p));
            }
            // Compare the new row against the best certificate's same span.
            let mut branch_tied = tied;
            let mut prune = false;
            if let Some(best) = self.best_cert.as_ref() {
                if tied {
                    match self.cert[row_start..].cmp(&best[row_start..self.cert.len()]) {
                        Ordering::Greater => prune = true,
                        Ordering::Less => branch_tied = false,
                        Ordering::Equal => {}
                    }
                }
            }
            if !prune {
                self.used[v as usize] = true;
                self.placed.push(v);
                self.descend(branch_tied);
                self.placed.pop();
                self.used[v as usize] = false;
            }
            self.cert.truncate(row_start);
        }
    }
}

/// All vertex permutations preserving the labeled support (that is, all
/// vertex maps extendable to multigraph automorphisms).
pub(crate) fn vertex_automorphisms(s: &Support) -> Vec<Vec<u32>> {
    let color = refine_colors(s);
    let mut result = Vec::new();
    let mut image: Vec<u32> = vec![u32::MAX; s.n];
    let mut used = vec![false; s.n];

    fn recurse(
        s: &Support,
        color: &[u32],
        v: usize,
        image: &mut Vec<u32>,
        used: &mut [bool],
        result: &mut Vec<Vec<u32>>,
    ) {
        if v == s.n {
            result.push(image.clone());
            return;
        }
        'cand: for w in 0..s.n as u32 {
            if used[w as usize] || color[w as usize] != color[v] {
                continue;
            }
            for u in 0..v as u32 {
                if s.mult(v as u32, u) != s.mult(w, image[u as usize]) {
                    continue 'cand;
                }
            }
            image[v] = w;
            used[w as usize] = true;
            recurse(s, color, v + 1, image, used, result);
            used[w as usize] = false;
            image[v] = u32::MAX;
        }
    }

    recurse(s, &color, 0, &mut image, &mut used, &mut result);
    result
}
