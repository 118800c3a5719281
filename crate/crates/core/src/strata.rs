//! Labels of the four cell decompositions of `Sym^n(ℂ)`: contingency cells,
//! Fox–Neuwirth–Fuchs cells and their transposed counterparts, and complex
//! strata by multiplicity. Configurations carry exact rational coordinates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::capacity::Guard;
use crate::contingency::{CmPoset, ContingencyMatrix, Kind};
use crate::error::{domain, Error, Result};
use crate::partitions::{refines, OrderedPartition};

/// Parses `"-3"`, `"1/2"`, `"0.125"` or `"-2.5e-1"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Domain(format!("not a rational number: {s:?}"));
    if t.contains('/') {
        let (a, b) = t.split_once('/').ok_or_else(bad)?;
        let num = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num = BigInt::from_str(&format!("{int}{frac}0")).map_err(|_| bad())? / 10;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut x = BigRational::from_integer(num);
    if scale >= 0 {
        x *= BigRational::from_integer(ten.pow(scale as u32));
    } else {
        x /= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -x } else { x })
}

fn rational_from_json<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    let s = match &v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        _ => return Err(serde::de::Error::custom("expected a rational as a string or number")),
    };
    parse_rational(&s).map_err(serde::de::Error::custom)
}

fn rational_to_json<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(deserialize_with = "rational_from_json", serialize_with = "rational_to_json")]
    pub re: BigRational,
    #[serde(deserialize_with = "rational_from_json", serialize_with = "rational_to_json")]
    pub im: BigRational,
}

impl Point {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Point { re, im }
    }

    pub fn integer(re: i64, im: i64) -> Self {
        Point::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }
}

/// A point of `Sym^n(ℂ)`: `n` points with repetition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<Point>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Point>) -> Self {
        PointConfiguration { points }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Domain(format!("malformed configuration: {e}")))
    }
}

/// Multiplicity of each distinct point at the grid of distinct real parts
/// (rows, increasing) and imaginary parts (columns, increasing).
pub fn contingency_label(z: &PointConfiguration) -> Result<ContingencyMatrix> {
    if z.points.is_empty() {
        return domain("a configuration needs at least one point");
    }
    let mut xs: Vec<&BigRational> = z.points.iter().map(|p| &p.re).collect();
    let mut ys: Vec<&BigRational> = z.points.iter().map(|p| &p.im).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let mut entries = vec![0u32; xs.len() * ys.len()];
    for p in &z.points {
        let i = xs.binary_search(&&p.re).expect("collected above");
        let j = ys.binary_search(&&p.im).expect("collected above");
        entries[i * ys.len() + j] += 1;
    }
    ContingencyMatrix::from_flat(xs.len(), ys.len(), entries)
}

/// Drops the zero components of `r`, keeping the order of the rest.
pub fn compress(r: &[u32]) -> Result<OrderedPartition> {
    let parts: Vec<u32> = r.iter().copied().filter(|&x| x > 0).collect();
    if parts.is_empty() {
        return domain("cannot compress an all-zero vector");
    }
    OrderedPartition::new(parts)
}

/// Label `[β : γ]` of a Fox–Neuwirth–Fuchs cell: `β` lists how many points lie
/// on each horizontal line, bottom to top, and `γ[j]` the multiplicities of
/// the distinct points on line `j`, left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub struct FnfLabel {
    pub beta: OrderedPartition,
    pub gamma: Vec<OrderedPartition>,
}

impl FnfLabel {
    pub fn new(beta: OrderedPartition, gamma: Vec<OrderedPartition>) -> Result<Self> {
        if beta.len() != gamma.len() || beta.parts().iter().zip(&gamma).any(|(&b, g)| g.weight() != b as usize) {
            return domain(format!("gamma does not match beta {beta}"));
        }
        Ok(FnfLabel { beta, gamma })
    }

    pub fn weight(&self) -> usize {
        self.beta.weight()
    }

    /// The lines' partitions concatenated into one partition refining `β`.
    pub fn flat_gamma(&self) -> OrderedPartition {
        OrderedPartition::new(self.gamma.iter().flat_map(|g| g.parts().iter().copied()).collect())
            .expect("nonempty positive parts")
    }

    /// Real dimension of the cell, `ℓ(β) + ℓ(γ)`.
    pub fn dimension(&self) -> usize {
        self.beta.len() + self.gamma.iter().map(OrderedPartition::len).sum::<usize>()
    }
}

impl fmt::Display for FnfLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.beta, self.flat_gamma())
    }
}

impl Serialize for FnfLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FnfLabel", 3)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("gamma", &self.gamma)?;
        st.serialize_field("label", &self.to_string())?;
        st.end()
    }
}

/// Label of the cell containing the contingency cell of `m`: `β` is the
/// column-sum margin and `γ[j]` is column `j` with zeros removed.
pub fn fnf_label(m: &ContingencyMatrix) -> FnfLabel {
    let beta = m.margins().vertical;
    let gamma = (0..m.cols())
        .map(|j| compress(&m.col(j).collect::<Vec<_>>()).expect("columns are nonzero"))
        .collect();
    FnfLabel { beta, gamma }
}

/// The same label for the coordinate swap `x + iy ↦ y + ix`, read off the transpose.
pub fn ifnf_label(m: &ContingencyMatrix) -> FnfLabel {
    fnf_label(&m.transpose())
}

/// Nonzero entries sorted non-increasingly: the multiplicities of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiplicityPartition {
    parts: Vec<u32>,
}

impl MultiplicityPartition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for MultiplicityPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn multiplicity_partition(m: &ContingencyMatrix) -> MultiplicityPartition {
    let mut parts: Vec<u32> = m.nonzero_entries().collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    MultiplicityPartition { parts }
}

/// Real dimensions of the four cells containing a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellDimensions {
    pub contingency: usize,
    pub fnf: usize,
    pub ifnf: usize,
    pub complex: usize,
}

pub fn cell_dimensions(m: &ContingencyMatrix) -> CellDimensions {
    CellDimensions {
        contingency: m.rows() + m.cols(),
        fnf: fnf_label(m).dimension(),
        ifnf: ifnf_label(m).dimension(),
        complex: 2 * multiplicity_partition(m).len(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub contingency: ContingencyMatrix,
    pub fnf: FnfLabel,
    pub ifnf: FnfLabel,
    pub multiplicity: MultiplicityPartition,
    pub dimensions: CellDimensions,
}

pub fn classify(z: &PointConfiguration) -> Result<Classification> {
    let m = contingency_label(z)?;
    Ok(Classification {
        fnf: fnf_label(&m),
        ifnf: ifnf_label(&m),
        multiplicity: multiplicity_partition(&m),
        dimensions: cell_dimensions(&m),
        contingency: m,
    })
}

/// Which anodyne contractions generate the equivalence relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnodyneScope {
    Horizontal,
    Vertical,
    Both,
}

impl AnodyneScope {
    fn admits(self, kind: Kind) -> bool {
        match self {
            AnodyneScope::Horizontal => kind == Kind::Horizontal,
            AnodyneScope::Vertical => kind == Kind::Vertical,
            AnodyneScope::Both => true,
        }
    }

    /// The label whose fibers the classes should be: FNF, transposed FNF, multiplicities.
    pub fn label(self, m: &ContingencyMatrix) -> String {
        match self {
            AnodyneScope::Horizontal => fnf_label(m).to_string(),
            AnodyneScope::Vertical => ifnf_label(m).to_string(),
            AnodyneScope::Both => multiplicity_partition(m).to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnodyneClass {
    /// Common label of the members, or of the first member when they disagree.
    pub label: String,
    pub members: Vec<ContingencyMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnodyneReport {
    pub n: usize,
    pub scope: AnodyneScope,
    pub class_count: usize,
    pub fiber_count: usize,
    /// Classes and label fibers are the same partition of `CM_n`.
    pub matches_fibers: bool,
    pub classes: Vec<AnodyneClass>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Classes of the equivalence relation on `CM_n` generated by anodyne
/// contractions of the given kinds, compared with the fibers of the
/// corresponding label.
pub fn anodyne_classes(n: usize, scope: AnodyneScope) -> Result<AnodyneReport> {
    Guard::Anodyne.check(n)?;
    let poset = CmPoset::build(n)?;
    anodyne_classes_in(&poset, scope)
}

pub fn anodyne_classes_in(poset: &CmPoset, scope: AnodyneScope) -> Result<AnodyneReport> {
    let len = poset.len();
    let mut parent: Vec<usize> = (0..len).collect();
    for c in poset.covers() {
        if scope.admits(c.kind) && poset.element(c.child).is_anodyne(c.kind, c.pos)? {
            let (a, b) = (find(&mut parent, c.child), find(&mut parent, c.parent));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..len {
        by_root.entry(find(&mut parent, k)).or_default().push(k);
    }
    let labels: Vec<String> = poset.elements().iter().map(|m| scope.label(m)).collect();
    let mut fibers: HashMap<&str, Vec<usize>> = HashMap::new();
    for (k, l) in labels.iter().enumerate() {
        fibers.entry(l.as_str()).or_default().push(k);
    }
    let matches_fibers = by_root.len() == fibers.len()
        && by_root.values().all(|members| fibers.get(labels[members[0]].as_str()) == Some(members));
    let classes = by_root
        .into_values()
        .map(|members| AnodyneClass {
            label: labels[members[0]].clone(),
            members: members.iter().map(|&k| poset.element(k).clone()).collect(),
        })
        .collect::<Vec<_>>();
    Ok(AnodyneReport {
        n: poset.n(),
        scope,
        class_count: classes.len(),
        fiber_count: fibers.len(),
        matches_fibers,
        classes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MeetGroup {
    pub fnf: FnfLabel,
    pub ifnf: FnfLabel,
    /// Distinct `(p, q)` shapes among the members.
    pub shapes: Vec<(usize, usize)>,
    /// Number of contingency cells in the intersection of the two cells.
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeetReport {
    pub n: usize,
    pub group_count: usize,
    pub pass: bool,
    pub groups: Vec<MeetGroup>,
}

/// Groups `CM_n` by the pair of FNF and transposed FNF labels and checks that
/// every group has a single shape, namely `(ℓ(α), ℓ(β))` read off the labels.
pub fn meet_check(n: usize) -> Result<MeetReport> {
    Guard::Meet.check(n)?;
    let elements = crate::contingency::enumerate_cm(&crate::contingency::CmFilter::weight(n))?;
    let mut groups: BTreeMap<(FnfLabel, FnfLabel), (Vec<(usize, usize)>, usize)> = BTreeMap::new();
    for m in &elements {
        let entry = groups.entry((fnf_label(m), ifnf_label(m))).or_default();
        if !entry.0.contains(&m.shape()) {
            entry.0.push(m.shape());
        }
        entry.1 += 1;
    }
    let groups: Vec<MeetGroup> = groups
        .into_iter()
        .map(|((fnf, ifnf), (mut shapes, size))| {
            shapes.sort_unstable();
            MeetGroup { fnf, ifnf, shapes, size }
        })
        .collect();
    let pass = groups
        .iter()
        .all(|g| g.shapes == [(g.ifnf.beta.len(), g.fnf.beta.len())]);
    Ok(MeetReport {
        n,
        group_count: groups.len(),
        pass,
        groups,
    })
}

/// Closure order on FNF labels: `a ≤ b` when the cell of `a` can arise from
/// that of `b` by letting horizontal lines and points collide.
///
/// `a.beta` must coarsen `b.beta`, and on each group of lines of `b` merged
/// into one line of `a`, the points of those lines must map onto the points of
/// `a` preserving left-to-right order on every line and adding multiplicities.
pub fn fnf_closure_leq(a: &FnfLabel, b: &FnfLabel) -> Result<bool> {
    if a.weight() != b.weight() {
        return domain(format!("labels have weights {} and {}", a.weight(), b.weight()));
    }
    if !refines(&a.beta, &b.beta)? {
        return Ok(false);
    }
    let mut line = 0;
    for (target_weight, target) in a.beta.parts().iter().zip(&a.gamma) {
        let mut acc = 0;
        let start = line;
        while acc < *target_weight {
            acc += b.beta.parts()[line];
            line += 1;
        }
        let mut room: Vec<u32> = target.parts().to_vec();
        if !shuffle_fits(&b.gamma[start..line], 0, 0, 0, &mut room) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Places part `part` of line `line` at position `≥ from`, backtracking over
/// every weakly increasing placement; succeeds when `room` is exactly used up.
fn shuffle_fits(lines: &[OrderedPartition], line: usize, part: usize, from: usize, room: &mut [u32]) -> bool {
    if line == lines.len() {
        return room.iter().all(|&r| r == 0);
    }
    if part == lines[line].len() {
        return shuffle_fits(lines, line + 1, 0, 0, room);
    }
    let x = lines[line].parts()[part];
    for s in from..room.len() {
        if room[s] >= x {
            room[s] -= x;
            let ok = shuffle_fits(lines, line, part + 1, s, room);
            room[s] += x;
            if ok {
                return true;
            }
        }
    }
    false
}
