//! Brute-force enumeration of galled trees for small leaf counts.
//!
//! Structures are built from the three shapes a galled tree can have at its root
//! (a leaf, a plain split, or a gall), deduplicated by a canonical byte encoding,
//! and checked against the graph definitions on an explicit node/edge expansion.
//! This route shares no arithmetic with the recursions in [`crate::counts`].
//!
//! Text form: a leaf is `x`, a split is `(A,B)`, and a root gall is `[a1,a2|b1;R]`:
//! subtrees hanging off the two sides of the gall in order from the root, then the
//! subtree below the reticulation node.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::comb::factorial;
use crate::counts::TreeClass;
use crate::error::GalledError;

pub const MAX_ORACLE_N: usize = 8;
pub const MAX_LABELED_ORACLE_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GalledStructure {
    Leaf,
    Internal(Box<GalledStructure>, Box<GalledStructure>),
    GallTop {
        left: Vec<GalledStructure>,
        right: Vec<GalledStructure>,
        ret: Box<GalledStructure>,
    },
}

/// Byte encoding equal for two structures iff they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

const TAG_LEAF: u8 = 0x00;
const TAG_INTERNAL: u8 = 0x01;
const TAG_GALL: u8 = 0x02;

fn push_framed(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

fn encode_seq(seq: &[Vec<u8>]) -> Vec<u8> {
    let mut out = (seq.len() as u32).to_be_bytes().to_vec();
    for e in seq {
        push_framed(&mut out, e);
    }
    out
}

impl GalledStructure {
    pub fn leaf() -> Self {
        GalledStructure::Leaf
    }

    pub fn internal(a: GalledStructure, b: GalledStructure) -> Self {
        GalledStructure::Internal(Box::new(a), Box::new(b))
    }

    pub fn gall(left: Vec<GalledStructure>, right: Vec<GalledStructure>, ret: GalledStructure) -> Self {
        GalledStructure::GallTop { left, right, ret: Box::new(ret) }
    }

    pub fn leaves(&self) -> usize {
        match self {
            GalledStructure::Leaf => 1,
            GalledStructure::Internal(a, b) => a.leaves() + b.leaves(),
            GalledStructure::GallTop { left, right, ret } => {
                left.iter().chain(right).map(Self::leaves).sum::<usize>() + ret.leaves()
            }
        }
    }

    pub fn galls(&self) -> usize {
        match self {
            GalledStructure::Leaf => 0,
            GalledStructure::Internal(a, b) => a.galls() + b.galls(),
            GalledStructure::GallTop { left, right, ret } => {
                1 + left.iter().chain(right).map(Self::galls).sum::<usize>() + ret.galls()
            }
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm(self.encode_with(&mut |_| Vec::new()))
    }

    /// Encoding in which leaf `i` in preorder carries `labels[i]`.
    fn labeled_form(&self, labels: &[u8]) -> CanonicalForm {
        let mut next = 0usize;
        CanonicalForm(self.encode_with(&mut |_| {
            next += 1;
            vec![labels[next - 1]]
        }))
    }

    /// `leaf` is called once per leaf, in preorder.
    fn encode_with(&self, leaf: &mut dyn FnMut(&Self) -> Vec<u8>) -> Vec<u8> {
        match self {
            GalledStructure::Leaf => {
                let mut v = vec![TAG_LEAF];
                v.extend(leaf(self));
                v
            }
            GalledStructure::Internal(a, b) => {
                let mut ea = a.encode_with(leaf);
                let mut eb = b.encode_with(leaf);
                if eb < ea {
                    std::mem::swap(&mut ea, &mut eb);
                }
                let mut v = vec![TAG_INTERNAL];
                push_framed(&mut v, &ea);
                push_framed(&mut v, &eb);
                v
            }
            GalledStructure::GallTop { left, right, ret } => {
                let l: Vec<Vec<u8>> = left.iter().map(|s| s.encode_with(leaf)).collect();
                let r: Vec<Vec<u8>> = right.iter().map(|s| s.encode_with(leaf)).collect();
                let er = ret.encode_with(leaf);
                let (el, err) = (encode_seq(&l), encode_seq(&r));
                let (first, second) = if err < el { (err, el) } else { (el, err) };
                let mut v = vec![TAG_GALL];
                push_framed(&mut v, &first);
                push_framed(&mut v, &second);
                push_framed(&mut v, &er);
                v
            }
        }
    }

    /// The same structure with split children and gall sides in canonical order.
    pub fn canonicalize(&self) -> GalledStructure {
        match self {
            GalledStructure::Leaf => GalledStructure::Leaf,
            GalledStructure::Internal(a, b) => {
                let (a, b) = (a.canonicalize(), b.canonicalize());
                if b.canonical_form() < a.canonical_form() {
                    GalledStructure::internal(b, a)
                } else {
                    GalledStructure::internal(a, b)
                }
            }
            GalledStructure::GallTop { left, right, ret } => {
                let l: Vec<_> = left.iter().map(Self::canonicalize).collect();
                let r: Vec<_> = right.iter().map(Self::canonicalize).collect();
                let enc = |s: &[GalledStructure]| {
                    encode_seq(&s.iter().map(|x| x.canonical_form().0).collect::<Vec<_>>())
                };
                let (l, r) = if enc(&r) < enc(&l) { (r, l) } else { (l, r) };
                GalledStructure::gall(l, r, ret.canonicalize())
            }
        }
    }

    /// Order of the automorphism group, as a count of label-preserving symmetries.
    pub fn automorphisms(&self) -> BigUint {
        match self {
            GalledStructure::Leaf => BigUint::one(),
            GalledStructure::Internal(a, b) => {
                let mut n = a.automorphisms() * b.automorphisms();
                if a.canonical_form() == b.canonical_form() {
                    n *= 2u32;
                }
                n
            }
            GalledStructure::GallTop { left, right, ret } => {
                let mut n = ret.automorphisms();
                for s in left.iter().chain(right) {
                    n *= s.automorphisms();
                }
                let same = left.len() == right.len()
                    && left.iter().zip(right).all(|(a, b)| a.canonical_form() == b.canonical_form());
                if same {
                    n *= 2u32;
                }
                n
            }
        }
    }

    /// Whether the grammar of `class` admits this structure at every gall.
    pub fn in_class(&self, class: TreeClass) -> bool {
        match self {
            GalledStructure::Leaf => true,
            GalledStructure::Internal(a, b) => a.in_class(class) && b.in_class(class),
            GalledStructure::GallTop { left, right, ret } => {
                let shape = match class {
                    TreeClass::General => !(left.is_empty() && right.is_empty()),
                    TreeClass::TimeConsistent => !left.is_empty() && !right.is_empty(),
                    TreeClass::SimplexTimeConsistent => {
                        !left.is_empty() && !right.is_empty() && **ret == GalledStructure::Leaf
                    }
                };
                shape && left.iter().chain(right).all(|s| s.in_class(class)) && ret.in_class(class)
            }
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GalledStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalledStructure::Leaf => write!(f, "x"),
            GalledStructure::Internal(a, b) => write!(f, "({a},{b})"),
            GalledStructure::GallTop { left, right, ret } => {
                write!(f, "[")?;
                for (i, s) in left.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "|")?;
                for (i, s) in right.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ";{ret}]")
            }
        }
    }
}

impl FromStr for GalledStructure {
    type Err = GalledError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.structure()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> GalledError {
        GalledError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), GalledError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn structure(&mut self) -> Result<GalledStructure, GalledError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(GalledStructure::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.structure()?;
                self.expect(b',')?;
                let b = self.structure()?;
                self.expect(b')')?;
                Ok(GalledStructure::internal(a, b))
            }
            Some(b'[') => {
                self.pos += 1;
                let left = self.sequence(b'|')?;
                self.expect(b'|')?;
                let right = self.sequence(b';')?;
                self.expect(b';')?;
                let ret = self.structure()?;
                self.expect(b']')?;
                Ok(GalledStructure::gall(left, right, ret))
            }
            Some(_) => Err(self.error("expected 'x', '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn sequence(&mut self, end: u8) -> Result<Vec<GalledStructure>, GalledError> {
        let mut out = Vec::new();
        if self.peek() == Some(end) {
            return Ok(out);
        }
        loop {
            out.push(self.structure()?);
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

/// Every isomorphism class of `class` with `n` leaves, keyed by canonical form.
pub fn generate_all(class: TreeClass, n: usize) -> Result<BTreeMap<CanonicalForm, GalledStructure>, GalledError> {
    if n > MAX_ORACLE_N {
        return Err(GalledError::SizeGuard { n, limit: MAX_ORACLE_N });
    }
    Ok(generate_upto(class, n).swap_remove(n))
}

fn generate_upto(class: TreeClass, n: usize) -> Vec<BTreeMap<CanonicalForm, GalledStructure>> {
    let mut by_size: Vec<BTreeMap<CanonicalForm, GalledStructure>> = vec![BTreeMap::new(); n + 1];
    // seqs[p]: ordered sequences of structures with p leaves in total.
    let mut seqs: Vec<Vec<Vec<GalledStructure>>> = vec![vec![Vec::new()]];
    for m in 1..=n {
        let mut found: Vec<GalledStructure> = Vec::new();
        if m == 1 {
            found.push(GalledStructure::Leaf);
        }
        for a in 1..m {
            if a > m - a {
                break;
            }
            for x in by_size[a].values() {
                for y in by_size[m - a].values() {
                    found.push(GalledStructure::internal(x.clone(), y.clone()));
                }
            }
        }
        for r in 1..m {
            if class == TreeClass::SimplexTimeConsistent && r != 1 {
                continue;
            }
            let rest = m - r;
            for p in 0..=rest {
                for left in &seqs[p] {
                    for right in &seqs[rest - p] {
                        for ret in by_size[r].values() {
                            let g = GalledStructure::gall(left.clone(), right.clone(), ret.clone());
                            if g.in_class(class) {
                                found.push(g);
                            }
                        }
                    }
                }
            }
        }
        for s in found {
            by_size[m].entry(s.canonical_form()).or_insert_with(|| s.canonicalize());
        }
        let mut next = Vec::new();
        for first in 1..=m {
            for head in by_size[first].values() {
                for tail in &seqs[m - first] {
                    let mut v = Vec::with_capacity(tail.len() + 1);
                    v.push(head.clone());
                    v.extend(tail.iter().cloned());
                    next.push(v);
                }
            }
        }
        seqs.push(next);
    }
    by_size
}

/// Histogram of gall counts over all structures of `class` with `n` leaves.
pub fn count_by_galls(class: TreeClass, n: usize) -> Result<BTreeMap<usize, BigUint>, GalledError> {
    let mut out = BTreeMap::new();
    for s in generate_all(class, n)?.values() {
        *out.entry(s.galls()).or_insert_with(BigUint::zero) += 1u32;
    }
    Ok(out)
}

/// Leaf-labeled counts per gall number, as `Σ n!/|Aut|` over unlabeled shapes.
pub fn labeled_count(class: TreeClass, n: usize) -> Result<BTreeMap<usize, BigUint>, GalledError> {
    if n > MAX_LABELED_ORACLE_N {
        return Err(GalledError::SizeGuard { n, limit: MAX_LABELED_ORACLE_N });
    }
    let nf = factorial(n);
    let mut out = BTreeMap::new();
    for s in generate_all(class, n)?.values() {
        *out.entry(s.galls()).or_insert_with(BigUint::zero) += &nf / s.automorphisms();
    }
    Ok(out)
}

/// Leaf-labeled counts by assigning every permutation of labels and deduplicating.
pub fn labeled_count_explicit(class: TreeClass, n: usize) -> Result<BTreeMap<usize, BigUint>, GalledError> {
    const LIMIT: usize = 5;
    if n > LIMIT {
        return Err(GalledError::SizeGuard { n, limit: LIMIT });
    }
    let perms = permutations(n);
    let mut out = BTreeMap::new();
    for s in generate_all(class, n)?.values() {
        let distinct: BTreeSet<CanonicalForm> = perms.iter().map(|p| s.labeled_form(p)).collect();
        *out.entry(s.galls()).or_insert_with(BigUint::zero) += distinct.len();
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u8);
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    Tree,
    Leaf,
    Reticulation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MultiEdge { from: usize, to: usize },
    RootDegree { indeg: usize, outdeg: usize },
    NodeDegree { node: usize, indeg: usize, outdeg: usize },
    DirectedCycle,
    NestedReticulation { reticulation: usize },
    SharedCycleNode { node: usize },
    ShortGallSide { reticulation: usize },
    NonLeafBelowReticulation { reticulation: usize },
    LeafCountMismatch { expected: usize, found: usize },
    GallCountMismatch { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MultiEdge { from, to } => write!(f, "multi-edge {from}->{to}"),
            Violation::RootDegree { indeg, outdeg } => write!(f, "root degree ({indeg},{outdeg})"),
            Violation::NodeDegree { node, indeg, outdeg } => write!(f, "node {node} degree ({indeg},{outdeg})"),
            Violation::DirectedCycle => write!(f, "directed cycle"),
            Violation::NestedReticulation { reticulation } => {
                write!(f, "reticulation {reticulation} cycle passes through another reticulation")
            }
            Violation::SharedCycleNode { node } => write!(f, "node {node} lies on two reticulation cycles"),
            Violation::ShortGallSide { reticulation } => {
                write!(f, "reticulation {reticulation} has a parent that is the gall top (not time-consistent)")
            }
            Violation::NonLeafBelowReticulation { reticulation } => {
                write!(f, "reticulation {reticulation} has a non-leaf child (not simplex)")
            }
            Violation::LeafCountMismatch { expected, found } => write!(f, "leaf count {found}, expected {expected}"),
            Violation::GallCountMismatch { expected, found } => write!(f, "gall count {found}, expected {expected}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Explicit rooted DAG: `children[v]` lists out-neighbours.
#[derive(Debug, Clone, Default)]
pub struct Network {
    pub children: Vec<Vec<usize>>,
}

impl Network {
    pub fn from_structure(s: &GalledStructure) -> Self {
        let mut net = Network::default();
        net.add(s);
        net
    }

    fn node(&mut self) -> usize {
        self.children.push(Vec::new());
        self.children.len() - 1
    }

    fn add(&mut self, s: &GalledStructure) -> usize {
        let v = self.node();
        match s {
            GalledStructure::Leaf => {}
            GalledStructure::Internal(a, b) => {
                let (x, y) = (self.add(a), self.add(b));
                self.children[v].extend([x, y]);
            }
            GalledStructure::GallTop { left, right, ret } => {
                let r = self.node();
                let below = self.add(ret);
                self.children[r].push(below);
                for side in [left, right] {
                    let mut prev = v;
                    for sub in side {
                        let w = self.node();
                        self.children[prev].push(w);
                        let hang = self.add(sub);
                        self.children[w].push(hang);
                        prev = w;
                    }
                    self.children[prev].push(r);
                }
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    fn parents(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.len()];
        for (v, cs) in self.children.iter().enumerate() {
            for &c in cs {
                p[c].push(v);
            }
        }
        p
    }

    pub fn kind(&self, v: usize) -> Option<NodeKind> {
        let indeg = self.children.iter().flatten().filter(|&&c| c == v).count();
        match (indeg, self.children[v].len()) {
            (0, 2) => Some(NodeKind::Root),
            (1, 2) => Some(NodeKind::Tree),
            (1, 0) | (0, 0) => Some(NodeKind::Leaf),
            (2, 1) => Some(NodeKind::Reticulation),
            _ => None,
        }
    }
}

/// Check a structure against the definitions of `class` on its explicit network.
pub fn validate(s: &GalledStructure, class: TreeClass) -> ValidationReport {
    let net = Network::from_structure(s);
    let (mut report, leaves, galls) = validate_network(&net, class);
    if leaves != s.leaves() {
        report.violations.push(Violation::LeafCountMismatch { expected: s.leaves(), found: leaves });
    }
    if galls != s.galls() {
        report.violations.push(Violation::GallCountMismatch { expected: s.galls(), found: galls });
    }
    report
}

/// Check an explicit network rooted at node 0; also returns its leaf and
/// reticulation counts.
pub fn validate_network(net: &Network, class: TreeClass) -> (ValidationReport, usize, usize) {
    let mut violations = Vec::new();
    let parents = net.parents();
    let n = net.len();

    for (v, cs) in net.children.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &c in cs {
            if !seen.insert(c) {
                violations.push(Violation::MultiEdge { from: v, to: c });
            }
        }
    }
    let (root_in, root_out) = (parents[0].len(), net.children[0].len());
    let single_leaf = n == 1;
    if !single_leaf && (root_in, root_out) != (0, 2) {
        violations.push(Violation::RootDegree { indeg: root_in, outdeg: root_out });
    }
    let mut leaves = 0;
    let mut rets = Vec::new();
    for v in 0..n {
        let d = (parents[v].len(), net.children[v].len());
        match d {
            (1, 0) => leaves += 1,
            (0, 0) if single_leaf => leaves += 1,
            (1, 2) => {}
            (2, 1) => rets.push(v),
            _ if v == 0 => {}
            (indeg, outdeg) => violations.push(Violation::NodeDegree { node: v, indeg, outdeg }),
        }
    }
    if !is_acyclic(&net.children) {
        violations.push(Violation::DirectedCycle);
        return (ValidationReport { violations }, leaves, rets.len());
    }

    // Each reticulation closes a cycle: climb from both parents through tree nodes
    // until the two climbs meet at the gall top.
    let mut on_cycle: HashMap<usize, usize> = HashMap::new();
    for &r in &rets {
        let (p, q) = (parents[r][0], parents[r][1]);
        let (path_p, path_q) = (climb(&parents, p, r, &rets), climb(&parents, q, r, &rets));
        let set_p: BTreeSet<usize> = path_p.iter().copied().collect();
        let Some(top_idx) = path_q.iter().position(|v| set_p.contains(v)) else {
            violations.push(Violation::NestedReticulation { reticulation: r });
            continue;
        };
        let top = path_q[top_idx];
        let side_q = &path_q[..top_idx];
        let side_p: Vec<usize> = path_p.iter().copied().take_while(|&v| v != top).collect();
        let mut cycle: BTreeSet<usize> = side_p.iter().chain(side_q).copied().collect();
        cycle.insert(top);
        cycle.insert(r);
        for v in cycle {
            *on_cycle.entry(v).or_insert(0) += 1;
        }
        // Time consistency: neither parent of the reticulation is the gall top.
        if class != TreeClass::General && (side_p.is_empty() || side_q.is_empty()) {
            violations.push(Violation::ShortGallSide { reticulation: r });
        }
        if class == TreeClass::SimplexTimeConsistent {
            let c = net.children[r][0];
            if !net.children[c].is_empty() {
                violations.push(Violation::NonLeafBelowReticulation { reticulation: r });
            }
        }
    }
    let mut shared: Vec<usize> = on_cycle.into_iter().filter(|&(_, k)| k > 1).map(|(v, _)| v).collect();
    shared.sort_unstable();
    for node in shared {
        violations.push(Violation::SharedCycleNode { node });
    }
    let galls = rets.len();
    (ValidationReport { violations }, leaves, galls)
}

/// Path `start, parent(start), …` ending at the root or at the first other
/// reticulation met on the way up.
fn climb(parents: &[Vec<usize>], start: usize, from: usize, rets: &[usize]) -> Vec<usize> {
    let mut path = vec![];
    let mut v = start;
    loop {
        path.push(v);
        if v != from && rets.contains(&v) {
            return path;
        }
        match parents[v].as_slice() {
            [p] => v = *p,
            _ => return path,
        }
    }
}

fn is_acyclic(children: &[Vec<usize>]) -> bool {
    let n = children.len();
    let mut indeg = vec![0usize; n];
    for cs in children {
        for &c in cs {
            indeg[c] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                stack.push(c);
            }
        }
    }
    seen == n
}
