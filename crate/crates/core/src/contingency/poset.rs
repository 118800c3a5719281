use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::capacity::Guard;
use crate::error::{domain, Result};

use super::enumerate::{enumerate_cm, CmFilter};
use super::matrix::{ContingencyMatrix, Kind};

/// `parent = contract(child, kind, pos)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cover {
    #[serde(rename = "from")]
    pub child: usize,
    #[serde(rename = "to")]
    pub parent: usize,
    pub kind: Kind,
    pub pos: usize,
}

/// `CM_n` ordered by contraction: `N ≤ M` iff `M` is obtained from `N` by a
/// sequence of contractions. `(n)` is the top; permutation matrices are the
/// minimal elements.
#[derive(Clone, Debug)]
pub struct CmPoset {
    n: usize,
    elements: Vec<ContingencyMatrix>,
    index: HashMap<ContingencyMatrix, usize>,
    covers: Vec<Cover>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct PosetExport<'a> {
    n: usize,
    elements: &'a [ContingencyMatrix],
    covers: &'a [Cover],
}

impl CmPoset {
    pub fn build(n: usize) -> Result<Self> {
        Guard::Poset.check(n)?;
        let elements = enumerate_cm(&CmFilter::weight(n))?;
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let mut covers = Vec::new();
        let mut up = vec![Vec::new(); elements.len()];
        let mut down = vec![Vec::new(); elements.len()];
        for (child, m) in elements.iter().enumerate() {
            for (kind, pos) in m.contractions() {
                let parent = index[&m.contract(kind, pos)?];
                up[child].push(covers.len());
                down[parent].push(covers.len());
                covers.push(Cover {
                    child,
                    parent,
                    kind,
                    pos,
                });
            }
        }
        Ok(CmPoset {
            n,
            elements,
            index,
            covers,
            up,
            down,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ContingencyMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &ContingencyMatrix {
        &self.elements[k]
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn index_of(&self, m: &ContingencyMatrix) -> Result<usize> {
        match self.index.get(m) {
            Some(&k) => Ok(k),
            None => domain(format!("{m} is not an element of CM_{}", self.n)),
        }
    }

    /// Indices into [`CmPoset::covers`] of the covers whose child is `k`.
    pub fn up_covers(&self, k: usize) -> &[usize] {
        &self.up[k]
    }

    /// Indices into [`CmPoset::covers`] of the covers whose parent is `k`.
    pub fn down_covers(&self, k: usize) -> &[usize] {
        &self.down[k]
    }

    pub fn cover_between(&self, child: usize, parent: usize) -> Option<usize> {
        self.up[child].iter().copied().find(|&c| self.covers[c].parent == parent)
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.up[k].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.down[k].is_empty()).collect()
    }

    fn reaches(&self, from: usize, to: usize, allow: impl Fn(Kind) -> bool) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            for &c in &self.up[x] {
                let cover = &self.covers[c];
                if allow(cover.kind) && !seen[cover.parent] {
                    stack.push(cover.parent);
                }
            }
        }
        false
    }

    /// `a ≤ b`: `b` is reachable from `a` by contractions of either kind.
    pub fn cm_leq(&self, a: usize, b: usize) -> bool {
        self.reaches(a, b, |_| true)
    }

    /// `a ≤′ b`, horizontal contractions only.
    pub fn cm_leq_horizontal(&self, a: usize, b: usize) -> bool {
        self.reaches(a, b, |k| k == Kind::Horizontal)
    }

    /// `a ≤″ b`, vertical contractions only.
    pub fn cm_leq_vertical(&self, a: usize, b: usize) -> bool {
        self.reaches(a, b, |k| k == Kind::Vertical)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PosetExport {
            n: self.n,
            elements: &self.elements,
            covers: &self.covers,
        })
        .expect("poset export is serializable")
    }

    /// Graphviz rendering of the Hasse diagram; edges point from child to parent.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph CM_{} {{\n  rankdir=BT;\n", self.n);
        for (k, m) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "  n{k} [label=\"{m}\"];");
        }
        for c in &self.covers {
            let style = match c.kind {
                Kind::Horizontal => "solid",
                Kind::Vertical => "dashed",
            };
            let _ = writeln!(
                s,
                "  n{} -> n{} [style={style}, label=\"{}{}\"];",
                c.child,
                c.parent,
                if c.kind == Kind::Horizontal { "h" } else { "v" },
                c.pos
            );
        }
        s.push_str("}\n");
        s
    }
}
