//! Representations of `(CM_n, ≤)` over ℚ: a vector space for every
//! contingency matrix and a linear map along every cover, from the finer
//! matrix to its contraction. Such a representation is a sheaf constructible
//! with respect to the contingency cells; it is constructible for a coarser
//! decomposition when the maps along the corresponding anodyne contractions
//! are isomorphisms.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::capacity::Guard;
use crate::contingency::{CmPoset, ContingencyMatrix, Kind};
use crate::error::{domain, structural, Error, Result};
use crate::linalg::QMatrix;
use crate::strata::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratification {
    /// Contingency cells: every representation qualifies.
    Cont,
    /// Fox–Neuwirth–Fuchs cells: anodyne horizontal contractions.
    Fnf,
    /// Transposed FNF cells: anodyne vertical contractions.
    Ifnf,
    /// Complex strata: anodyne contractions of both kinds.
    Complex,
}

impl Stratification {
    pub const ALL: [Stratification; 4] = [
        Stratification::Cont,
        Stratification::Fnf,
        Stratification::Ifnf,
        Stratification::Complex,
    ];

    fn constrains(self, kind: Kind) -> bool {
        match self {
            Stratification::Cont => false,
            Stratification::Fnf => kind == Kind::Horizontal,
            Stratification::Ifnf => kind == Kind::Vertical,
            Stratification::Complex => true,
        }
    }
}

impl FromStr for Stratification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cont" => Ok(Stratification::Cont),
            "fnf" => Ok(Stratification::Fnf),
            "ifnf" => Ok(Stratification::Ifnf),
            "complex" => Ok(Stratification::Complex),
            _ => domain(format!("unknown stratification {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PosetRepresentation {
    poset: Arc<CmPoset>,
    dims: Vec<usize>,
    /// Indexed like `poset.covers()`; shape `dim(parent) × dim(child)`.
    maps: Vec<QMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    n: usize,
    spaces: BTreeMap<String, usize>,
    #[serde(default)]
    maps: Vec<MapJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    from: usize,
    to: usize,
    matrix: Vec<Vec<serde_json::Value>>,
}

/// Two routes `bottom → left → top` and `bottom → right → top` whose composites differ.
#[derive(Clone, Debug, Serialize)]
pub struct DiamondFailure {
    pub bottom: ContingencyMatrix,
    pub left: ContingencyMatrix,
    pub right: ContingencyMatrix,
    pub top: ContingencyMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub diamonds_checked: usize,
    pub valid: bool,
    pub failures: Vec<DiamondFailure>,
}

/// An anodyne cover whose map is not an isomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct CoverWitness {
    pub from: ContingencyMatrix,
    pub to: ContingencyMatrix,
    pub kind: Kind,
    pub pos: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructibilityReport {
    pub stratification: Stratification,
    pub constructible: bool,
    pub anodyne_covers_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoverWitness>,
}

impl PosetRepresentation {
    /// `maps[c]` is the map along cover `c` of `poset`, of shape
    /// `dims[parent] × dims[child]`.
    pub fn from_parts(poset: Arc<CmPoset>, dims: Vec<usize>, maps: Vec<QMatrix>) -> Result<Self> {
        if dims.len() != poset.len() {
            return structural(format!("{} dimensions for {} elements", dims.len(), poset.len()));
        }
        if maps.len() != poset.covers().len() {
            return structural(format!("{} maps for {} covers", maps.len(), poset.covers().len()));
        }
        for (c, m) in poset.covers().iter().zip(&maps) {
            if (m.rows(), m.cols()) != (dims[c.parent], dims[c.child]) {
                return structural(format!(
                    "map {} -> {} has shape {}x{}, expected {}x{}",
                    c.child,
                    c.parent,
                    m.rows(),
                    m.cols(),
                    dims[c.parent],
                    dims[c.child]
                ));
            }
        }
        Ok(PosetRepresentation { poset, dims, maps })
    }

    /// Every space of dimension `d`, every map the identity.
    pub fn constant(poset: Arc<CmPoset>, d: usize) -> Self {
        let dims = vec![d; poset.len()];
        let maps = vec![QMatrix::identity(d); poset.covers().len()];
        PosetRepresentation { poset, dims, maps }
    }

    /// Reads the JSON exchange format. Spaces not listed are zero; maps between
    /// two nonzero spaces are required, others default to the zero map.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RepJson =
            serde_json::from_str(text).map_err(|e| Error::Structural(format!("malformed representation: {e}")))?;
        Guard::Sheaf.check(raw.n)?;
        let poset = Arc::new(CmPoset::build(raw.n)?);
        let mut dims = vec![0; poset.len()];
        for (k, d) in &raw.spaces {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Structural(format!("space key {k:?} is not an element index")))?;
            if k >= poset.len() {
                return structural(format!("element {k} is not in CM_{}", raw.n));
            }
            dims[k] = *d;
        }
        let mut maps: Vec<Option<QMatrix>> = vec![None; poset.covers().len()];
        for m in &raw.maps {
            if m.from >= poset.len() || m.to >= poset.len() {
                return structural(format!("map {} -> {} refers to a missing element", m.from, m.to));
            }
            let Some(c) = poset.cover_between(m.from, m.to) else {
                return structural(format!("{} -> {} is not a cover", m.from, m.to));
            };
            if maps[c].is_some() {
                return structural(format!("map {} -> {} given twice", m.from, m.to));
            }
            let (rows, cols) = (dims[m.to], dims[m.from]);
            let shape_ok = m.matrix.len() == rows && m.matrix.iter().all(|r| r.len() == cols);
            if !shape_ok {
                return structural(format!("map {} -> {} must be {rows}x{cols}", m.from, m.to));
            }
            let mut q = QMatrix::zeros(rows, cols);
            for (i, r) in m.matrix.iter().enumerate() {
                for (j, v) in r.iter().enumerate() {
                    q[(i, j)] = match v {
                        serde_json::Value::String(s) => parse_rational(s),
                        serde_json::Value::Number(x) => parse_rational(&x.to_string()),
                        _ => structural("matrix entries must be rationals"),
                    }
                    .map_err(|e| Error::Structural(e.to_string()))?;
                }
            }
            maps[c] = Some(q);
        }
        let maps = maps
            .into_iter()
            .zip(poset.covers())
            .map(|(m, c)| match m {
                Some(q) => Ok(q),
                None if dims[c.child] == 0 || dims[c.parent] == 0 => Ok(QMatrix::zeros(dims[c.parent], dims[c.child])),
                None => structural(format!("missing map {} -> {}", c.child, c.parent)),
            })
            .collect::<Result<Vec<_>>>()?;
        PosetRepresentation::from_parts(poset, dims, maps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let spaces: BTreeMap<String, usize> = self.dims.iter().enumerate().map(|(k, &d)| (k.to_string(), d)).collect();
        let maps: Vec<MapJson> = self
            .poset
            .covers()
            .iter()
            .zip(&self.maps)
            .map(|(c, q)| MapJson {
                from: c.child,
                to: c.parent,
                matrix: (0..q.rows())
                    .map(|i| (0..q.cols()).map(|j| serde_json::Value::String(q[(i, j)].to_string())).collect())
                    .collect(),
            })
            .collect();
        serde_json::json!({ "n": self.poset.n(), "spaces": spaces, "maps": maps })
    }

    pub fn poset(&self) -> &CmPoset {
        &self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, cover: usize) -> &QMatrix {
        &self.maps[cover]
    }

    pub fn map_mut(&mut self, cover: usize) -> &mut QMatrix {
        &mut self.maps[cover]
    }

    /// Checks that the two composites around every interval of length two agree.
    pub fn validate(&self) -> ValidationReport {
        let p = &*self.poset;
        let mut checked = 0;
        let mut failures = Vec::new();
        for bottom in 0..p.len() {
            // two-step routes grouped by their top
            let mut routes: HashMap<usize, Vec<(usize, QMatrix)>> = HashMap::new();
            for &c1 in p.up_covers(bottom) {
                let mid = p.covers()[c1].parent;
                for &c2 in p.up_covers(mid) {
                    let top = p.covers()[c2].parent;
                    routes.entry(top).or_default().push((mid, &self.maps[c2] * &self.maps[c1]));
                }
            }
            let mut tops: Vec<_> = routes.into_iter().collect();
            tops.sort_unstable_by_key(|(t, _)| *t);
            for (top, via) in tops {
                for (mid, composite) in &via[1..] {
                    checked += 1;
                    if *composite != via[0].1 {
                        failures.push(DiamondFailure {
                            bottom: p.element(bottom).clone(),
                            left: p.element(via[0].0).clone(),
                            right: p.element(*mid).clone(),
                            top: p.element(top).clone(),
                        });
                    }
                }
            }
        }
        ValidationReport {
            diamonds_checked: checked,
            valid: failures.is_empty(),
            failures,
        }
    }

    /// Whether every map along an anodyne contraction relevant to `strat` is an
    /// isomorphism. Fails with a structural error on a representation that
    /// does not pass [`validate`](Self::validate).
    pub fn is_constructible(&self, strat: Stratification) -> Result<ConstructibilityReport> {
        let v = self.validate();
        if !v.valid {
            let f = &v.failures[0];
            return structural(format!(
                "not a representation: composites {} -> {} -> {} and via {} differ",
                f.bottom, f.left, f.top, f.right
            ));
        }
        let p = &*self.poset;
        let mut checked = 0;
        for (c, q) in p.covers().iter().zip(&self.maps) {
            if !strat.constrains(c.kind) || !p.element(c.child).is_anodyne(c.kind, c.pos)? {
                continue;
            }
            checked += 1;
            if !q.is_invertible() {
                return Ok(ConstructibilityReport {
                    stratification: strat,
                    constructible: false,
                    anodyne_covers_checked: checked,
                    witness: Some(CoverWitness {
                        from: p.element(c.child).clone(),
                        to: p.element(c.parent).clone(),
                        kind: c.kind,
                        pos: c.pos,
                        rows: q.rows(),
                        cols: q.cols(),
                        rank: q.rank(),
                    }),
                });
            }
        }
        Ok(ConstructibilityReport {
            stratification: strat,
            constructible: true,
            anodyne_covers_checked: checked,
            witness: None,
        })
    }
}

/// [`PosetRepresentation::constant`] on a freshly built `CM_n`.
pub fn constant_sheaf(n: usize, d: usize) -> Result<PosetRepresentation> {
    Guard::Sheaf.check(n)?;
    Ok(PosetRepresentation::constant(Arc::new(CmPoset::build(n)?), d))
}

/// The zero map of the right shape for `cover`.
pub fn zero_map(rep: &PosetRepresentation, cover: usize) -> QMatrix {
    let c = rep.poset.covers()[cover];
    QMatrix::zeros(rep.dims[c.parent], rep.dims[c.child])
}
