//! Finite ultrametric spaces given as weighted rooted trees.
//!
//! Points are leaves and `d(x, y)` is the weight of their lowest common
//! ancestor. Weights strictly decrease from the root down, which makes the
//! distance ultrametric. Distances are stored as ranks into the sorted list
//! of distinct weights so ball membership is an integer comparison.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{Ball, UltraSpace};
use crate::error::{Error, Result};
use crate::valcore::{fmt_rational, parse_rational, rat, Radius};

#[derive(Clone, Debug)]
enum Node {
    Leaf(String),
    Inner(BigRational, Vec<Node>),
}

#[derive(Clone, Debug)]
pub struct TreeSpace {
    root: Node,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Distinct distances in increasing order; `weights[0] == 0`.
    weights: Vec<BigRational>,
    rank: Vec<Vec<u32>>,
}

fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_node(toks: &[String], pos: &mut usize) -> Result<Node> {
    let t = toks.get(*pos).ok_or_else(|| Error::Parse("unexpected end of tree".into()))?;
    *pos += 1;
    match t.as_str() {
        "(" => {
            let w = toks.get(*pos).ok_or_else(|| Error::Parse("missing weight".into()))?;
            let w = parse_rational(w)?;
            *pos += 1;
            let mut kids = Vec::new();
            while toks.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= toks.len() {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                kids.push(parse_node(toks, pos)?);
            }
            *pos += 1;
            if kids.is_empty() {
                return Err(Error::Parse("inner node without children".into()));
            }
            Ok(Node::Inner(w, kids))
        }
        ")" => Err(Error::Parse("unexpected ')'".into())),
        label => Ok(Node::Leaf(label.to_string())),
    }
}

fn validate(node: &Node, bound: Option<&BigRational>) -> Result<()> {
    if let Node::Inner(w, kids) = node {
        if !w.is_positive() {
            return Err(Error::Parse(format!("weight {} must be positive", fmt_rational(w))));
        }
        if bound.is_some_and(|b| w >= b) {
            return Err(Error::Parse(format!("weight {} does not decrease toward the leaves", fmt_rational(w))));
        }
        for k in kids {
            validate(k, Some(w))?;
        }
    }
    Ok(())
}

fn collect_leaves(node: &Node, out: &mut Vec<String>) {
    match node {
        Node::Leaf(l) => out.push(l.clone()),
        Node::Inner(_, kids) => kids.iter().for_each(|k| collect_leaves(k, out)),
    }
}

impl TreeSpace {
    pub fn parse(s: &str) -> Result<Self> {
        let toks = tokenize(s);
        let mut pos = 0;
        let root = parse_node(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse("trailing tokens after tree".into()));
        }
        TreeSpace::build(root)
    }

    fn build(root: Node) -> Result<Self> {
        validate(&root, None)?;
        let mut labels = Vec::new();
        collect_leaves(&root, &mut labels);
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate leaf label {l:?}")));
            }
        }
        let mut weights = vec![BigRational::zero()];
        let mut pairs: Vec<(usize, usize, BigRational)> = Vec::new();
        fn walk(node: &Node, index: &HashMap<String, usize>, pairs: &mut Vec<(usize, usize, BigRational)>, w: &mut Vec<BigRational>) -> Vec<usize> {
            match node {
                Node::Leaf(l) => vec![index[l]],
                Node::Inner(wt, kids) => {
                    let groups: Vec<Vec<usize>> = kids.iter().map(|k| walk(k, index, pairs, w)).collect();
                    w.push(wt.clone());
                    for a in 0..groups.len() {
                        for b in a + 1..groups.len() {
                            for &x in &groups[a] {
                                for &y in &groups[b] {
                                    pairs.push((x, y, wt.clone()));
                                }
                            }
                        }
                    }
                    groups.concat()
                }
            }
        }
        walk(&root, &index, &mut pairs, &mut weights);
        weights.sort();
        weights.dedup();
        let n = labels.len();
        let mut rank = vec![vec![0u32; n]; n];
        for (x, y, w) in pairs {
            let r = weights.binary_search(&w).unwrap() as u32;
            rank[x][y] = r;
            rank[y][x] = r;
        }
        Ok(TreeSpace { root, labels, index, weights, rank })
    }

    /// A random tree on `n` leaves labelled `l0, l1, ...`: leaves are split
    /// recursively into 2 to 4 groups and each child weight is the parent
    /// weight times `k/8` for a random `k` in `1..=7`.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        assert!(n >= 1);
        fn grow<R: Rng>(rng: &mut R, leaves: &mut [String], w: BigRational) -> Node {
            if leaves.len() == 1 {
                return Node::Leaf(leaves[0].clone());
            }
            leaves.shuffle(rng);
            let parts = rng.gen_range(2..=leaves.len().min(4));
            let mut cuts: Vec<usize> = (1..leaves.len()).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
            cuts.sort();
            cuts.insert(0, 0);
            cuts.push(leaves.len());
            let kids = cuts
                .windows(2)
                .map(|c| {
                    let cw = &w * rat(rng.gen_range(1..=7), 8);
                    grow(rng, &mut leaves[c[0]..c[1]].to_vec(), cw)
                })
                .collect();
            Node::Inner(w, kids)
        }
        let mut leaves: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
        let root = if n == 1 {
            Node::Inner(BigRational::from_integer(1.into()), vec![Node::Leaf(leaves[0].clone())])
        } else {
            grow(rng, &mut leaves, BigRational::from_integer(1.into()))
        };
        TreeSpace::build(root).expect("generated trees are valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// All distances that occur, including 0, in increasing order.
    pub fn distances(&self) -> &[BigRational] {
        &self.weights
    }

    fn threshold(&self, r: &Radius) -> usize {
        match self.weights.binary_search(r.value()) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// Membership of `B(c, r)` as a set of leaves.
    pub fn ball_set(&self, b: &Ball<usize>) -> FixedBitSet {
        let t = self.threshold(&b.radius) as u32;
        let mut s = FixedBitSet::with_capacity(self.len());
        for (j, &rk) in self.rank[b.center].iter().enumerate() {
            if rk <= t {
                s.insert(j);
            }
        }
        s
    }

    /// The same set of points with radius shrunk to the largest distance
    /// from the center actually attained inside the ball.
    pub fn normalize(&self, b: &Ball<usize>) -> Ball<usize> {
        let t = self.threshold(&b.radius) as u32;
        let m = self.rank[b.center].iter().filter(|&&r| r <= t).max().copied().unwrap_or(0);
        Ball::new(b.center, Radius::new(self.weights[m as usize].clone()).unwrap())
    }
}

impl UltraSpace for TreeSpace {
    type Point = usize;
    type Dist = BigRational;

    fn dist(&self, x: &usize, y: &usize) -> Result<BigRational> {
        Ok(self.weights[self.rank[*x][*y] as usize].clone())
    }
    fn cmp_dist_radius(&self, d: &BigRational, r: &Radius) -> Result<Ordering> {
        Ok(d.cmp(r.value()))
    }
    fn within(&self, x: &usize, y: &usize, r: &Radius) -> Result<bool> {
        Ok(self.rank[*x][*y] as usize <= self.threshold(r))
    }
    fn render(&self, x: &usize) -> String {
        self.labels[*x].clone()
    }
    fn parse_point(&self, s: &str) -> Result<usize> {
        self.index_of(s.trim()).ok_or_else(|| Error::Parse(format!("unknown leaf {s:?}")))
    }
}

impl fmt::Display for TreeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(n: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                Node::Leaf(l) => f.write_str(l),
                Node::Inner(w, kids) => {
                    write!(f, "({}", fmt_rational(w))?;
                    for k in kids {
                        f.write_str(" ")?;
                        go(k, f)?;
                    }
                    f.write_str(")")
                }
            }
        }
        go(&self.root, f)
    }
}

/// Outcome of the pairwise-to-total intersection check on a finite space.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub applicable: bool,
    pub common_point: Option<usize>,
    pub holds: bool,
}

impl TreeSpace {
    /// If every two balls of the family meet (as sets), the whole family
    /// must share a point; found by enumerating leaves.
    pub fn check_pairwise_to_total(&self, family: &[Ball<usize>]) -> FamilyCheck {
        let sets: Vec<FixedBitSet> = family.iter().map(|b| self.ball_set(b)).collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if sets[i].is_disjoint(&sets[j]) {
                    return FamilyCheck { applicable: false, common_point: None, holds: true };
                }
            }
        }
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        for s in &sets {
            all.intersect_with(s);
        }
        let common = all.ones().next();
        FamilyCheck { applicable: true, common_point: common, holds: common.is_some() }
    }

    /// Set-level cross-check of a nested chain: the intersection is
    /// nonempty and contains `point`.
    pub fn chain_meets_at(&self, chain: &[Ball<usize>], point: usize) -> bool {
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        for b in chain {
            all.intersect_with(&self.ball_set(b));
        }
        all.contains(point)
    }

    pub fn set_subset(&self, b1: &Ball<usize>, b2: &Ball<usize>) -> bool {
        self.ball_set(b1).is_subset(&self.ball_set(b2))
    }
}
