//! Tensor-product sums for symmetric multi-variable contour integrals.
//!
//! The integrands handled here factor into per-variable weights, a pair
//! factor between variables of the same group (a Sklyanin-type factor that
//! vanishes on the diagonal), and a cross factor between variables of
//! different groups. Inside a group the integrand is symmetric, so the sum
//! over ordered tuples divided by `d!` equals the sum over strictly
//! increasing index tuples; only those are visited.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// One group of `dim` integration variables sharing a discretised contour.
pub(crate) struct Group {
    /// Per-node factor, quadrature weight included.
    pub node: Vec<C64>,
    /// Pair factor `pair[a * M + b]`, symmetric.
    pub pair: Vec<C64>,
    pub dim: usize,
}

impl Group {
    pub fn new(node: Vec<C64>, pair: impl Fn(usize, usize) -> C64, dim: usize) -> Self {
        let m = node.len();
        let mut table = vec![C64::new(0.0, 0.0); if dim > 1 { m * m } else { 0 }];
        if dim > 1 {
            for a in 0..m {
                for b in a + 1..m {
                    let p = pair(a, b);
                    table[a * m + b] = p;
                    table[b * m + a] = p;
                }
            }
        }
        Group { node, pair: table, dim }
    }

    fn len(&self) -> usize {
        self.node.len()
    }
}

/// Cross factor `table[a * M_h + b]` between node `a` of group `g` and node
/// `b` of group `h`.
pub(crate) struct Cross {
    pub g: usize,
    pub h: usize,
    pub table: Vec<C64>,
}

impl Cross {
    pub fn new(groups: &[Group], g: usize, h: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let (mg, mh) = (groups[g].len(), groups[h].len());
        let mut table = Vec::with_capacity(mg * mh);
        for a in 0..mg {
            for b in 0..mh {
                table.push(f(a, b));
            }
        }
        Cross { g, h, table }
    }
}

struct Plan<'a> {
    groups: &'a [Group],
    /// Group of every slot; slots of one group are consecutive.
    slot: Vec<usize>,
    /// `links[d]`: for each earlier slot `s`, the table and orientation
    /// linking slot `s` to slot `d`.
    links: Vec<Vec<(usize, &'a [C64], usize, bool)>>,
}

/// `sum over increasing index tuples per group of prod(node) * prod(pair) * prod(cross)`.
pub(crate) fn grouped_sum(groups: &[Group], crosses: &[Cross]) -> C64 {
    let mut slot = Vec::new();
    for (g, grp) in groups.iter().enumerate() {
        slot.extend(std::iter::repeat_n(g, grp.dim));
    }
    if slot.is_empty() {
        return C64::new(1.0, 0.0);
    }
    let mut links = Vec::with_capacity(slot.len());
    for d in 0..slot.len() {
        let mut l = Vec::new();
        for s in 0..d {
            let (gs, gd) = (slot[s], slot[d]);
            if gs == gd {
                // Pair factor: index (idx[s], idx[d]) in a square table.
                l.push((s, groups[gd].pair.as_slice(), groups[gd].len(), false));
            } else if let Some(c) = crosses.iter().find(|c| c.g == gs && c.h == gd) {
                l.push((s, c.table.as_slice(), groups[gd].len(), false));
            } else if let Some(c) = crosses.iter().find(|c| c.g == gd && c.h == gs) {
                l.push((s, c.table.as_slice(), groups[gs].len(), true));
            }
        }
        links.push(l);
    }
    let plan = Plan { groups, slot, links };
    let first = &groups[plan.slot[0]];
    let parts: Vec<C64> = (0..first.len())
        .into_par_iter()
        .map(|k| {
            let mut idx = vec![0usize; plan.slot.len()];
            idx[0] = k;
            plan.recurse(1, &mut idx, first.node[k])
        })
        .collect();
    parts.iter().sum()
}

impl Plan<'_> {
    fn recurse(&self, depth: usize, idx: &mut [usize], acc: C64) -> C64 {
        if depth == self.slot.len() {
            return acc;
        }
        let g = self.slot[depth];
        let grp = &self.groups[g];
        let start = if self.slot[depth - 1] == g { idx[depth - 1] + 1 } else { 0 };
        let mut total = C64::new(0.0, 0.0);
        for k in start..grp.len() {
            let mut f = acc * grp.node[k];
            for &(s, table, stride, transposed) in &self.links[depth] {
                f *= if transposed { table[k * stride + idx[s]] } else { table[idx[s] * stride + k] };
            }
            idx[depth] = k;
            total += self.recurse(depth + 1, idx, f);
        }
        total
    }
}
