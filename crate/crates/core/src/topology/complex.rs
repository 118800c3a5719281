use std::collections::HashSet;

use crate::contingency::CmPoset;
use crate::error::Result;

/// Fixed-size bitset over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub(crate) fn insert(&mut self, k: usize) {
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub(crate) fn contains(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub(crate) fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// A finite poset whose vertices `0..len` are numbered along a linear
/// extension, so `a < b` implies `a < b` as integers.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<usize>,
    greater: Vec<BitSet>,
}

impl FinitePoset {
    /// Builds the poset generated by `relations` (pairs `a < b`) on `0..len`.
    /// Returns `None` when the relations contain a cycle.
    pub fn from_relations(len: usize, relations: &[(usize, usize)]) -> Option<Self> {
        let mut succ = vec![Vec::new(); len];
        let mut indeg = vec![0usize; len];
        for &(a, b) in relations {
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm, smallest label first
        let mut order = Vec::with_capacity(len);
        let mut ready: std::collections::BTreeSet<usize> = (0..len).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() != len {
            return None;
        }
        let mut pos = vec![0; len];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut greater = vec![BitSet::new(len); len];
        for k in (0..len).rev() {
            let v = order[k];
            let mut set = BitSet::new(len);
            for &w in &succ[v] {
                set.insert(pos[w]);
                set.union_with(&greater[pos[w]]);
            }
            greater[k] = set;
        }
        Some(FinitePoset {
            labels: order,
            greater,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Caller-facing identifier of vertex `v`.
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.greater[a].contains(b)
    }
}

/// The interval `{N : N < M}` (strict) or `{N : N ≤ M}` of `CM_n`, labelled by
/// poset indices.
pub fn lower_interval(poset: &CmPoset, m: usize, strict: bool) -> Result<FinitePoset> {
    if m >= poset.len() {
        return crate::error::domain(format!("element {m} is not in CM_{}", poset.n()));
    }
    let mut members = vec![m];
    let mut seen = HashSet::from([m]);
    let mut k = 0;
    while k < members.len() {
        for &c in poset.down_covers(members[k]) {
            let child = poset.covers()[c].child;
            if seen.insert(child) {
                members.push(child);
            }
        }
        k += 1;
    }
    if strict {
        members.retain(|&x| x != m);
    }
    members.sort_unstable();
    let local: std::collections::HashMap<usize, usize> =
        members.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut relations = Vec::new();
    for (k, &x) in members.iter().enumerate() {
        for &c in poset.up_covers(x) {
            if let Some(&j) = local.get(&poset.covers()[c].parent) {
                relations.push((k, j));
            }
        }
    }
    let inner = FinitePoset::from_relations(members.len(), &relations).expect("CM_n is acyclic");
    Ok(FinitePoset {
        labels: inner.labels.iter().map(|&k| members[k]).collect(),
        greater: inner.greater,
    })
}

/// Abstract simplicial complex, simplices grouped by dimension, each a strictly
/// increasing tuple of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    simplices: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplex {
    /// Downward closure of `facets` over vertices `0..vertex_count`.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<u32>]) -> Self {
        let mut all: HashSet<Vec<u32>> = HashSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let k = f.len();
            for mask in 1u64..(1 << k) {
                let face: Vec<u32> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(face);
            }
        }
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
        for s in all {
            let d = s.len() - 1;
            if simplices.len() <= d {
                simplices.resize(d + 1, Vec::new());
            }
            simplices[d].push(s);
        }
        for group in &mut simplices {
            group.sort();
        }
        SimplicialComplex {
            vertices: (0..vertex_count).collect(),
            simplices,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// `-1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<u32>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Face counts `f_0, f_1, …`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn is_closed_under_faces(&self) -> bool {
        let lookup: Vec<HashSet<&[u32]>> = self
            .simplices
            .iter()
            .map(|g| g.iter().map(Vec::as_slice).collect())
            .collect();
        self.simplices.iter().enumerate().skip(1).all(|(d, group)| {
            group.iter().all(|s| {
                s.windows(2).all(|w| w[0] < w[1])
                    && (0..s.len()).all(|i| {
                        let face: Vec<u32> = s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                        lookup[d - 1].contains(face.as_slice())
                    })
            })
        })
    }

    /// Connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let n = self.simplices(0).len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let pos: std::collections::HashMap<u32, usize> =
            self.simplices(0).iter().enumerate().map(|(k, s)| (s[0], k)).collect();
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, pos[&e[0]]), find(&mut parent, pos[&e[1]]));
            parent[a] = b;
        }
        (0..n).filter(|&k| find(&mut parent, k) == k).count()
    }
}

/// Order complex (nerve): one simplex per chain of distinct comparable elements.
/// Vertex `v` of the result is vertex `v` of `poset`.
pub fn order_complex(poset: &FinitePoset) -> SimplicialComplex {
    let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut chain = Vec::new();
    fn extend(poset: &FinitePoset, chain: &mut Vec<u32>, out: &mut Vec<Vec<Vec<u32>>>) {
        let d = chain.len() - 1;
        if out.len() <= d {
            out.push(Vec::new());
        }
        out[d].push(chain.clone());
        let last = *chain.last().expect("chains are nonempty") as usize;
        for w in poset.greater[last].iter() {
            chain.push(w as u32);
            extend(poset, chain, out);
            chain.pop();
        }
    }
    for v in 0..poset.len() {
        chain.push(v as u32);
        extend(poset, &mut chain, &mut simplices);
        chain.pop();
    }
    for group in &mut simplices {
        group.sort_unstable();
    }
    SimplicialComplex {
        vertices: poset.labels.clone(),
        simplices,
    }
}
