//! Index sets, set partitions and lattice configurations.
//!
//! A configuration `x_N` assigns a lattice site to every index of a finite
//! index set `N`. Partitions of `N` describe which coordinates are forced to
//! coincide: the coincidence plane `C_P` is the set of configurations that are
//! constant on every block of `P`. The order used throughout is
//! `P1 <= P2` iff every block of `P1` sits inside a block of `P2`, which is
//! the same as `C_P2 ⊆ C_P1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate_partitions`]; Bell(12) = 4 213 597.
pub const MAX_ENUMERATION: usize = 12;

/// A finite set of natural numbers stored in strictly increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds an index set, rejecting duplicates. Input order is irrelevant.
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = elements.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet(format!("duplicate entries in {v:?}")));
        }
        Ok(IndexSet(v))
    }

    /// `{1, ..., n}`; empty for `n = 0`.
    pub fn range(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Position of `i` in the natural order of the set.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<usize> = self.iter().chain(other.iter()).collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.iter().filter(|&i| other.contains(i)).collect())
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.iter().filter(|&i| !other.contains(i)).collect())
    }

    /// All subsets in order of increasing bitmask over the natural order.
    pub fn subsets(&self) -> impl Iterator<Item = IndexSet> + '_ {
        let n = self.len();
        (0u64..(1u64 << n)).map(move |mask| {
            IndexSet(
                (0..n)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| self.0[b])
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A set partition of a ground [`IndexSet`], blocks sorted by least element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    ground: IndexSet,
    blocks: Vec<IndexSet>,
}

impl Partition {
    /// Validates and canonicalizes a block list.
    pub fn from_blocks(ground: &IndexSet, blocks: Vec<IndexSet>) -> Result<Self> {
        let mut seen = Vec::with_capacity(ground.len());
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.is_subset(ground) {
                return Err(Error::NotASubset(b.to_string(), ground.to_string()));
            }
            seen.extend(b.iter());
        }
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != total {
            return Err(Error::InvalidPartition("blocks overlap".into()));
        }
        if seen.len() != ground.len() {
            return Err(Error::InvalidPartition(format!(
                "blocks do not cover {ground}"
            )));
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.min());
        Ok(Partition {
            ground: ground.clone(),
            blocks,
        })
    }

    /// Builds a partition from a restricted growth string over the natural
    /// order of `ground` (`rgs[p]` is the block number of the `p`-th element).
    pub fn from_rgs(ground: &IndexSet, rgs: &[usize]) -> Result<Self> {
        if rgs.len() != ground.len() {
            return Err(Error::InvalidPartition(format!(
                "growth string of length {} for ground of size {}",
                rgs.len(),
                ground.len()
            )));
        }
        let mut next = 0;
        for &r in rgs {
            if r > next {
                return Err(Error::InvalidPartition(format!(
                    "{rgs:?} is not a restricted growth string"
                )));
            }
            if r == next {
                next += 1;
            }
        }
        let mut blocks = vec![Vec::new(); next];
        for (p, &r) in rgs.iter().enumerate() {
            blocks[r].push(ground.0[p]);
        }
        Ok(Partition {
            ground: ground.clone(),
            blocks: blocks.into_iter().map(IndexSet).collect(),
        })
    }

    /// All singletons, `P_min`.
    pub fn finest(ground: &IndexSet) -> Self {
        Partition {
            ground: ground.clone(),
            blocks: ground.iter().map(|i| IndexSet(vec![i])).collect(),
        }
    }

    /// A single block, `P_max`; the empty partition for an empty ground.
    pub fn coarsest(ground: &IndexSet) -> Self {
        let blocks = if ground.is_empty() {
            Vec::new()
        } else {
            vec![ground.clone()]
        };
        Partition {
            ground: ground.clone(),
            blocks,
        }
    }

    pub fn ground(&self) -> &IndexSet {
        &self.ground
    }

    pub fn blocks(&self) -> &[IndexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains_block(&self, block: &IndexSet) -> bool {
        self.blocks.iter().any(|b| b == block)
    }

    /// Block number of index `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    /// Restricted growth string over the natural order of the ground set.
    pub fn rgs(&self) -> Vec<usize> {
        self.ground
            .iter()
            .map(|i| self.block_of(i).expect("ground index is covered"))
            .collect()
    }

    /// The partition of `ground \ block` obtained by dropping one block.
    pub fn without_block(&self, block: &IndexSet) -> Option<Partition> {
        if !self.contains_block(block) {
            return None;
        }
        Some(Partition {
            ground: self.ground.difference(block),
            blocks: self.blocks.iter().filter(|b| *b != block).cloned().collect(),
        })
    }

    /// Adds `block` (disjoint from the ground) as a new block.
    pub fn with_block(&self, block: &IndexSet) -> Result<Partition> {
        if block.is_empty() || !block.is_disjoint(&self.ground) {
            return Err(Error::InvalidPartition(format!(
                "{block} cannot be added to a partition of {}",
                self.ground
            )));
        }
        let mut blocks = self.blocks.clone();
        blocks.push(block.clone());
        Partition::from_blocks(&self.ground.union(block), blocks)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// One point of `X^N`: a lattice site for every index of the domain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Config {
    domain: IndexSet,
    sites: Vec<usize>,
}

impl Config {
    /// `sites[p]` is the site of the `p`-th index of `domain` in natural order.
    pub fn new(domain: IndexSet, sites: Vec<usize>) -> Result<Self> {
        if domain.len() != sites.len() {
            return Err(Error::InvalidIndexSet(format!(
                "{} sites for domain {domain}",
                sites.len()
            )));
        }
        Ok(Config { domain, sites })
    }

    /// Configuration on `{1, ..., n}`.
    pub fn from_sites(sites: Vec<usize>) -> Self {
        Config {
            domain: IndexSet::range(sites.len()),
            sites,
        }
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Site of index `i`.
    pub fn site(&self, i: usize) -> Option<usize> {
        self.domain.position(i).map(|p| self.sites[p])
    }

    /// `π_I x`, the restriction to a subset of the domain.
    pub fn project(&self, subset: &IndexSet) -> Result<Config> {
        if !subset.is_subset(&self.domain) {
            return Err(Error::NotASubset(subset.to_string(), self.domain.to_string()));
        }
        let sites = subset.iter().map(|i| self.site(i).unwrap()).collect();
        Ok(Config {
            domain: subset.clone(),
            sites,
        })
    }

    /// Joins two configurations on disjoint domains into one on the union.
    pub fn join(&self, other: &Config) -> Result<Config> {
        if !self.domain.is_disjoint(&other.domain) {
            return Err(Error::InvalidIndexSet(format!(
                "{} and {} overlap",
                self.domain, other.domain
            )));
        }
        let domain = self.domain.union(&other.domain);
        let sites = domain
            .iter()
            .map(|i| self.site(i).or_else(|| other.site(i)).unwrap())
            .collect();
        Ok(Config { domain, sites })
    }
}

impl fmt::Debug for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.sites, self.domain)
    }
}

/// A bijection of a ground index set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    ground: IndexSet,
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(ground: &IndexSet) -> Self {
        Permutation {
            ground: ground.clone(),
            images: ground.as_slice().to_vec(),
        }
    }

    /// `images[p]` is the image of the `p`-th element of `ground`.
    pub fn from_images(ground: &IndexSet, images: Vec<usize>) -> Result<Self> {
        let ok = images.len() == ground.len()
            && IndexSet::new(images.iter().copied()).is_ok_and(|s| s == *ground);
        if !ok {
            return Err(Error::NotABijection(ground.to_string()));
        }
        Ok(Permutation {
            ground: ground.clone(),
            images,
        })
    }

    /// Builds a permutation of `{1, ..., n}` from one-line notation.
    pub fn from_one_line(images: Vec<usize>) -> Result<Self> {
        Self::from_images(&IndexSet::range(images.len()), images)
    }

    pub fn transposition(ground: &IndexSet, a: usize, b: usize) -> Result<Self> {
        let pa = ground
            .position(a)
            .ok_or_else(|| Error::NotASubset(format!("{{{a}}}"), ground.to_string()))?;
        let pb = ground
            .position(b)
            .ok_or_else(|| Error::NotASubset(format!("{{{b}}}"), ground.to_string()))?;
        let mut p = Self::identity(ground);
        p.images.swap(pa, pb);
        Ok(p)
    }

    pub fn ground(&self) -> &IndexSet {
        &self.ground
    }

    pub fn apply(&self, i: usize) -> Option<usize> {
        self.ground.position(i).map(|p| self.images[p])
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (p, &img) in self.images.iter().enumerate() {
            images[self.ground.position(img).unwrap()] = self.ground.0[p];
        }
        Permutation {
            ground: self.ground.clone(),
            images,
        }
    }

    /// `self · other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch(
                self.ground.to_string(),
                other.ground.to_string(),
            ));
        }
        let images = other
            .images
            .iter()
            .map(|&i| self.apply(i).unwrap())
            .collect();
        Ok(Permutation {
            ground: self.ground.clone(),
            images,
        })
    }

    /// Every permutation of `ground`, in lexicographic order of one-line notation.
    pub fn all(ground: &IndexSet) -> Vec<Permutation> {
        let mut cur = ground.as_slice().to_vec();
        let mut out = vec![Permutation {
            ground: ground.clone(),
            images: cur.clone(),
        }];
        while next_permutation(&mut cur) {
            out.push(Permutation {
                ground: ground.clone(),
                images: cur.clone(),
            });
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Objects on which a permutation of the index ground set acts.
pub trait Permute: Sized {
    fn permuted(&self, sigma: &Permutation) -> Result<Self>;
}

impl Permute for IndexSet {
    /// `σ(I)`; `I` must be a subset of the ground of `σ`.
    fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if !self.is_subset(&sigma.ground) {
            return Err(Error::NotASubset(self.to_string(), sigma.ground.to_string()));
        }
        IndexSet::new(self.iter().map(|i| sigma.apply(i).unwrap()))
    }
}

impl Permute for Partition {
    fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if self.ground != sigma.ground {
            return Err(Error::GroundMismatch(
                self.ground.to_string(),
                sigma.ground.to_string(),
            ));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.permuted(sigma))
            .collect::<Result<Vec<_>>>()?;
        Partition::from_blocks(&self.ground, blocks)
    }
}

impl Permute for Config {
    /// `f_σ(x) = x ∘ σ⁻¹`: the site at index `i` moves to index `σ(i)`.
    fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if self.domain != sigma.ground {
            return Err(Error::GroundMismatch(
                self.domain.to_string(),
                sigma.ground.to_string(),
            ));
        }
        let mut sites = vec![0; self.sites.len()];
        for (p, &i) in self.domain.0.iter().enumerate() {
            let target = self.domain.position(sigma.apply(i).unwrap()).unwrap();
            sites[target] = self.sites[p];
        }
        Ok(Config {
            domain: self.domain.clone(),
            sites,
        })
    }
}

/// `σ(obj)` for index sets, partitions and configurations.
pub fn act_sigma<O: Permute>(sigma: &Permutation, obj: &O) -> Result<O> {
    obj.permuted(sigma)
}

/// Bell numbers `B_0 ..= B_n`, by the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<u64> {
    let mut out = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &r in &row {
            let last = *next.last().unwrap();
            next.push(last + r);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

pub fn bell(n: usize) -> u64 {
    bell_numbers(n)[n]
}

/// Every partition of `ground` exactly once, ordered lexicographically by
/// restricted growth string.
pub fn enumerate_partitions(ground: &IndexSet) -> Result<Vec<Partition>> {
    let n = ground.len();
    if n > MAX_ENUMERATION {
        return Err(Error::CardinalityTooLarge(n, MAX_ENUMERATION));
    }
    let mut out = Vec::with_capacity(bell(n) as usize);
    if n == 0 {
        out.push(Partition::coarsest(ground));
        return Ok(out);
    }
    let mut rgs = vec![0usize; n];
    // maxes[p] = max(rgs[0..p])
    let mut maxes = vec![0usize; n];
    loop {
        out.push(Partition::from_rgs(ground, &rgs)?);
        let mut p = n - 1;
        loop {
            if p == 0 {
                return Ok(out);
            }
            if rgs[p] <= maxes[p] {
                rgs[p] += 1;
                break;
            }
            rgs[p] = 0;
            p -= 1;
        }
        for q in p + 1..n {
            rgs[q] = 0;
            maxes[q] = maxes[q - 1].max(rgs[q - 1]);
        }
    }
}

fn check_ground(a: &Partition, b: &Partition) -> Result<()> {
    if a.ground != b.ground {
        return Err(Error::GroundMismatch(
            a.ground.to_string(),
            b.ground.to_string(),
        ));
    }
    Ok(())
}

/// `P1 <= P2`: every block of `P1` lies inside a block of `P2`.
pub fn refines_leq(p1: &Partition, p2: &Partition) -> Result<bool> {
    check_ground(p1, p2)?;
    Ok(p1
        .blocks
        .iter()
        .all(|b| p2.blocks.iter().any(|c| b.is_subset(c))))
}

/// Least upper bound in the refinement order.
pub fn join(p1: &Partition, p2: &Partition) -> Result<Partition> {
    check_ground(p1, p2)?;
    let ground = &p1.ground;
    let n = ground.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for block in p1.blocks.iter().chain(p2.blocks.iter()) {
        let first = ground.position(block.0[0]).unwrap();
        for i in block.iter().skip(1) {
            let a = find(&mut parent, first);
            let b = find(&mut parent, ground.position(i).unwrap());
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in 0..n {
        let r = find(&mut parent, p);
        groups.entry(r).or_default().push(ground.0[p]);
    }
    Partition::from_blocks(ground, groups.into_values().map(IndexSet).collect())
}

/// The coarsest partition whose coincidence plane contains `x`: indices are
/// grouped by equal site.
pub fn equality_pattern(x: &Config) -> Partition {
    let mut rgs = Vec::with_capacity(x.sites.len());
    let mut seen: Vec<usize> = Vec::new();
    for &s in &x.sites {
        match seen.iter().position(|&t| t == s) {
            Some(b) => rgs.push(b),
            None => {
                rgs.push(seen.len());
                seen.push(s);
            }
        }
    }
    Partition::from_rgs(&x.domain, &rgs).expect("first-occurrence labels form a growth string")
}

/// The indicator `1^N_I(x)`: one iff `I` is exactly one class of equal sites
/// of `x`, so its indices share a site and no other index sits there.
pub fn indicator_b(subset: &IndexSet, x: &Config) -> Result<bool> {
    if subset.is_empty() || !subset.is_subset(&x.domain) {
        return Err(Error::NotASubset(subset.to_string(), x.domain.to_string()));
    }
    let site = x.site(subset.0[0]).unwrap();
    Ok(x
        .domain
        .iter()
        .zip(x.sites.iter())
        .all(|(i, &s)| subset.contains(i) == (s == site)))
}

/// Membership of `x` in the coincidence plane `C_P`.
pub fn membership_c(p: &Partition, x: &Config) -> Result<bool> {
    if p.ground != x.domain {
        return Err(Error::GroundMismatch(p.ground.to_string(), x.domain.to_string()));
    }
    Ok(p.blocks.iter().all(|b| {
        let s = x.site(b.0[0]).unwrap();
        b.iter().all(|i| x.site(i) == Some(s))
    }))
}

/// Number of partitions `P` with `x ∈ C_P`; the product of Bell numbers of
/// the block sizes of the equality pattern.
pub fn coincidence_weight(x: &Config) -> Result<u64> {
    if x.domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let pattern = equality_pattern(x);
    let bells = bell_numbers(x.domain.len());
    Ok(pattern.blocks.iter().map(|b| bells[b.len()]).product())
}
