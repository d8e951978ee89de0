//! Exhaustive enumeration of numerical semigroups by genus (the genus
//! tree), per-(genus, multiplicity) counting of totals and AHF members, and
//! ratio reporting.
//!
//! The tree is rooted at the whole of the nonnegative integers; the
//! children of a node are obtained by removing one effective generator (a
//! minimal generator exceeding the Frobenius number), which visits every
//! numerical semigroup exactly once. Nodes are fixed-width bitsets copied
//! on the stack per DFS frame.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factorization;
use crate::rational::Rational;
use crate::semigroup::NumericalSemigroup;

const WORDS: usize = 4;
const CAPACITY: u32 = (WORDS * 64) as u32;

/// Largest genus the fixed-width node representation supports: building the
/// visitor-facing semigroup needs the sieve up to frobenius + 2m <= 4g + 1.
pub const MAX_ENUMERATION_GENUS: u32 = (CAPACITY - 2) / 4;

/// Genus at which the tree is split into independent parallel subtree
/// tasks.
pub const DEFAULT_SPLIT_GENUS: u32 = 6;

/// Reference cumulative figures for genus <= 25, kept for cross-checking
/// census runs. See [`compare_with_reference`].
pub const REFERENCE_GENUS: u32 = 25;
pub const REFERENCE_TOTAL_THROUGH_25: u64 = 1_179_593;
pub const REFERENCE_AHF_THROUGH_25: u64 = 1_032_971;

#[derive(Clone, Copy, PartialEq, Eq)]
struct BitSet {
    words: [u64; WORDS],
}

impl BitSet {
    fn filled() -> Self {
        BitSet {
            words: [u64::MAX; WORDS],
        }
    }

    fn empty() -> Self {
        BitSet { words: [0; WORDS] }
    }

    #[inline]
    fn test(&self, i: u32) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: u32) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    fn clear(&mut self, i: u32) {
        self.words[(i / 64) as usize] &= !(1 << (i % 64));
    }

    /// Indices of set bits in [lo, hi], ascending.
    fn iter_range(&self, lo: u32, hi: u32) -> impl Iterator<Item = u32> + '_ {
        (lo..=hi.min(CAPACITY - 1)).filter(move |&i| self.test(i))
    }
}

/// One genus-tree node: a semigroup with its membership and atom bitsets
/// maintained incrementally.
#[derive(Clone, Copy)]
struct Node {
    members: BitSet,
    atoms: BitSet,
    multiplicity: u32,
    frobenius: i32,
    genus: u32,
}

impl Node {
    fn root() -> Self {
        let mut atoms = BitSet::empty();
        atoms.set(1);
        Node {
            members: BitSet::filled(),
            atoms,
            multiplicity: 1,
            frobenius: -1,
            genus: 0,
        }
    }

    /// Effective generators: minimal generators above the Frobenius number.
    fn effective(&self) -> impl Iterator<Item = u32> + '_ {
        let lo = (self.frobenius + 1).max(0) as u32;
        let hi = self.frobenius.max(0) as u32 + self.multiplicity + 1;
        self.atoms.iter_range(lo, hi)
    }

    /// Removes the effective generator `a`.
    fn child(&self, a: u32) -> Node {
        let mut members = self.members;
        members.clear(a);
        // Removing the multiplicity only happens for ordinary semigroups
        // {0, m, m+1, ...}, whose child has multiplicity m + 1.
        let multiplicity = if a == self.multiplicity {
            self.multiplicity + 1
        } else {
            self.multiplicity
        };
        let mut atoms = self.atoms;
        atoms.clear(a);
        // New atoms can only appear in (a, a + m']: anything larger still
        // decomposes through m', anything not larger than a keeps its old
        // decomposition.
        for x in a + 1..=a + multiplicity {
            if atoms.test(x) {
                continue;
            }
            let decomposable = (multiplicity..=x / 2)
                .any(|s| members.test(s) && members.test(x - s));
            if !decomposable {
                atoms.set(x);
            }
        }
        Node {
            members,
            atoms,
            multiplicity,
            frobenius: a as i32,
            genus: self.genus + 1,
        }
    }

    fn to_semigroup(self) -> NumericalSemigroup {
        let m = self.multiplicity as u64;
        let len = (self.frobenius as i64 + 2 * m as i64 + 1) as usize;
        let membership: Vec<bool> = (0..len as u32).map(|n| self.members.test(n)).collect();
        let atom_hi = self.frobenius.max(0) as u32 + 2 * self.multiplicity;
        let gens: Vec<u64> = self
            .atoms
            .iter_range(1, atom_hi)
            .map(u64::from)
            .collect();
        NumericalSemigroup::from_raw_parts_unchecked(
            gens,
            m,
            membership,
            self.frobenius as i64,
            self.genus as u64,
        )
    }
}

fn check_capacity(max_genus: u32) -> Result<()> {
    if max_genus > MAX_ENUMERATION_GENUS {
        return Err(Error::GenusCapacity {
            requested: max_genus,
            max: MAX_ENUMERATION_GENUS,
        });
    }
    Ok(())
}

fn visit_subtree(node: Node, max_genus: u32, visitor: &mut impl FnMut(&NumericalSemigroup)) {
    // Classical bound F <= 2g - 1; a violation means the enumeration state
    // is corrupt, so fail hard.
    assert!(
        node.frobenius < 2 * node.genus as i32,
        "frobenius {} exceeds 2*genus - 1 at genus {}",
        node.frobenius,
        node.genus
    );
    visitor(&node.to_semigroup());
    if node.genus >= max_genus {
        return;
    }
    for a in node.effective() {
        visit_subtree(node.child(a), max_genus, visitor);
    }
}

/// Invokes `visitor` exactly once per numerical semigroup of genus at most
/// `max_genus`, sequentially.
pub fn enumerate_by_genus(
    max_genus: u32,
    mut visitor: impl FnMut(&NumericalSemigroup),
) -> Result<()> {
    check_capacity(max_genus)?;
    visit_subtree(Node::root(), max_genus, &mut visitor);
    Ok(())
}

/// Collects the frontier at `split_genus` while visiting every shallower
/// node sequentially. Callers ensure `split_genus <= max_genus`.
fn split_frontier(
    split_genus: u32,
    visitor: &mut impl FnMut(&NumericalSemigroup),
) -> Vec<Node> {
    fn walk(
        node: Node,
        split_genus: u32,
        visitor: &mut impl FnMut(&NumericalSemigroup),
        frontier: &mut Vec<Node>,
    ) {
        if node.genus == split_genus {
            frontier.push(node);
            return;
        }
        visitor(&node.to_semigroup());
        for a in node.effective() {
            walk(node.child(a), split_genus, visitor, frontier);
        }
    }
    let mut frontier = Vec::new();
    walk(Node::root(), split_genus, visitor, &mut frontier);
    frontier
}

/// Parallel enumeration: subtrees hanging off the split frontier run as
/// independent tasks, so `visitor` must tolerate concurrent invocation.
/// `threads = 0` uses the rayon default. The multiset of visited semigroups
/// is identical to the sequential enumeration.
pub fn enumerate_by_genus_parallel(
    max_genus: u32,
    threads: usize,
    visitor: impl Fn(&NumericalSemigroup) + Sync,
) -> Result<()> {
    check_capacity(max_genus)?;
    if max_genus < DEFAULT_SPLIT_GENUS {
        return enumerate_by_genus(max_genus, |s| visitor(s));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let frontier = split_frontier(DEFAULT_SPLIT_GENUS, &mut |s| visitor(s));
    pool.install(|| {
        frontier
            .par_iter()
            .for_each(|node| visit_subtree(*node, max_genus, &mut |s| visitor(s)));
    });
    Ok(())
}

/// Per-(genus, multiplicity) cell of the census.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CensusCell {
    pub count: u64,
    pub ahf_count: u64,
}

/// Counts of numerical semigroups (total and AHF) per genus and
/// multiplicity, for genus up to `max_genus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    max_genus: u32,
    rows: BTreeMap<(u32, u64), CensusCell>,
}

impl CensusTable {
    fn new(max_genus: u32) -> Self {
        CensusTable {
            max_genus,
            rows: BTreeMap::new(),
        }
    }

    fn record(&mut self, s: &NumericalSemigroup) {
        let cell = self
            .rows
            .entry((s.genus() as u32, s.multiplicity()))
            .or_default();
        cell.count += 1;
        if factorization::is_ahf(s) {
            cell.ahf_count += 1;
        }
    }

    fn merge(&mut self, other: CensusTable) {
        for (key, cell) in other.rows {
            let mine = self.rows.entry(key).or_default();
            mine.count += cell.count;
            mine.ahf_count += cell.ahf_count;
        }
    }

    pub fn max_genus(&self) -> u32 {
        self.max_genus
    }

    /// Rows ordered by (genus, multiplicity).
    pub fn rows(&self) -> impl Iterator<Item = (u32, u64, CensusCell)> + '_ {
        self.rows.iter().map(|(&(g, m), &cell)| (g, m, cell))
    }

    pub fn cell(&self, genus: u32, multiplicity: u64) -> Option<CensusCell> {
        self.rows.get(&(genus, multiplicity)).copied()
    }

    /// (n_g, h_g): totals for one genus.
    pub fn genus_totals(&self, genus: u32) -> (u64, u64) {
        self.rows
            .range((genus, 0)..(genus + 1, 0))
            .fold((0, 0), |(n, h), (_, cell)| {
                (n + cell.count, h + cell.ahf_count)
            })
    }

    /// Cumulative (total, AHF) over all tabulated genera.
    pub fn cumulative(&self) -> (u64, u64) {
        self.rows.values().fold((0, 0), |(n, h), cell| {
            (n + cell.count, h + cell.ahf_count)
        })
    }

    /// CSV with the fixed schema `genus,multiplicity,count,ahf_count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("genus,multiplicity,count,ahf_count\n");
        for (g, m, cell) in self.rows() {
            out.push_str(&format!("{g},{m},{},{}\n", cell.count, cell.ahf_count));
        }
        out
    }

    pub fn summary(&self) -> CensusSummary {
        let per_genus = (0..=self.max_genus)
            .map(|g| {
                let (n, h) = self.genus_totals(g);
                PerGenusRow { g, n, h }
            })
            .collect();
        let (n, h) = self.cumulative();
        CensusSummary {
            max_genus: self.max_genus,
            per_genus,
            cumulative: CumulativeRow { n, h },
            partial: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct PerGenusRow {
    pub g: u32,
    pub n: u64,
    pub h: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CumulativeRow {
    pub n: u64,
    pub h: u64,
}

/// JSON shape: {max_genus, per_genus: [{g, n, h}], cumulative: {n, h}}.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CensusSummary {
    pub max_genus: u32,
    pub per_genus: Vec<PerGenusRow>,
    pub cumulative: CumulativeRow,
    pub partial: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub max_genus: u32,
    /// 0 means the rayon default.
    pub threads: usize,
    pub split_genus: u32,
}

impl CensusOptions {
    pub fn new(max_genus: u32) -> Self {
        CensusOptions {
            max_genus,
            threads: 0,
            split_genus: DEFAULT_SPLIT_GENUS,
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

/// Censuses all semigroups of genus at most `max_genus` with the default
/// parallel split.
pub fn census(max_genus: u32) -> Result<CensusTable> {
    census_with(CensusOptions::new(max_genus))
}

/// Censuses with explicit threading options. Results are identical for any
/// thread count: subtree tables are merged by commutative addition.
pub fn census_with(opts: CensusOptions) -> Result<CensusTable> {
    check_capacity(opts.max_genus)?;
    let mut table = CensusTable::new(opts.max_genus);
    if opts.max_genus < opts.split_genus {
        visit_subtree(Node::root(), opts.max_genus, &mut |s| table.record(s));
        return Ok(table);
    }
    let frontier = split_frontier(opts.split_genus, &mut |s| table.record(s));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let merged = pool.install(|| {
        frontier
            .par_iter()
            .map(|node| {
                let mut local = CensusTable::new(opts.max_genus);
                visit_subtree(*node, opts.max_genus, &mut |s| local.record(s));
                local
            })
            .reduce(
                || CensusTable::new(opts.max_genus),
                |mut acc, t| {
                    acc.merge(t);
                    acc
                },
            )
    });
    table.merge(merged);
    Ok(table)
}

/// h/n ratio rows, exact and decimal, per genus and per (multiplicity,
/// genus) cell. Trends are reported, never asserted.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub per_genus: Vec<GenusRatioRow>,
    pub per_cell: Vec<CellRatioRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusRatioRow {
    pub g: u32,
    pub n: u64,
    pub h: u64,
    pub ratio: Option<Rational>,
    pub decimal: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRatioRow {
    pub g: u32,
    pub m: u64,
    pub n: u64,
    pub h: u64,
    pub ratio: Option<Rational>,
    pub decimal: Option<f64>,
}

pub fn ratio_report(table: &CensusTable) -> RatioReport {
    let ratio = |h: u64, n: u64| {
        if n == 0 {
            (None, None)
        } else {
            (Some(Rational::new(h, n)), Some(h as f64 / n as f64))
        }
    };
    let per_genus = (0..=table.max_genus())
        .map(|g| {
            let (n, h) = table.genus_totals(g);
            let (r, d) = ratio(h, n);
            GenusRatioRow {
                g,
                n,
                h,
                ratio: r,
                decimal: d,
            }
        })
        .collect();
    let per_cell = table
        .rows()
        .map(|(g, m, cell)| {
            let (r, d) = ratio(cell.ahf_count, cell.count);
            CellRatioRow {
                g,
                m,
                n: cell.count,
                h: cell.ahf_count,
                ratio: r,
                decimal: d,
            }
        })
        .collect();
    RatioReport {
        per_genus,
        per_cell,
    }
}

/// Comparison of a census against the recorded reference figures for genus
/// <= 25. `None` when the table does not reach genus 25.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceComparison {
    pub computed_total: u64,
    pub computed_ahf: u64,
    pub reference_total: u64,
    pub reference_ahf: u64,
    pub matches: bool,
    /// Cumulative AHF fraction h/n of the computed census.
    pub ahf_fraction: f64,
}

pub fn compare_with_reference(table: &CensusTable) -> Option<ReferenceComparison> {
    if table.max_genus() < REFERENCE_GENUS {
        return None;
    }
    let (mut n, mut h) = (0, 0);
    for g in 0..=REFERENCE_GENUS {
        let (ng, hg) = table.genus_totals(g);
        n += ng;
        h += hg;
    }
    Some(ReferenceComparison {
        computed_total: n,
        computed_ahf: h,
        reference_total: REFERENCE_TOTAL_THROUGH_25,
        reference_ahf: REFERENCE_AHF_THROUGH_25,
        matches: n == REFERENCE_TOTAL_THROUGH_25 && h == REFERENCE_AHF_THROUGH_25,
        ahf_fraction: h as f64 / n as f64,
    })
}

/// Independent oracle for small genus: searches all gap sets
/// `G ⊆ {1, …, 2g}` of size `g` whose complement is closed under addition.
/// Returns canonical (minimal) generator lists, sorted. Refuses `g > 8`.
pub fn enumerate_small_oracle(genus: u32) -> Result<Vec<Vec<u64>>> {
    if genus > 8 {
        return Err(Error::invalid(format!(
            "oracle refuses genus {genus} > 8 (exponential subset search)"
        )));
    }
    if genus == 0 {
        return Ok(vec![vec![1]]);
    }
    let top = 2 * genus as usize;
    // member[0..=top]; decided positions < cursor.
    let mut member = vec![true; top + 1];
    let mut out = Vec::new();
    search_gap_sets(&mut member, 1, genus as usize, top, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn search_gap_sets(
    member: &mut Vec<bool>,
    cursor: usize,
    gaps_left: usize,
    top: usize,
    out: &mut Vec<Vec<u64>>,
) {
    if cursor > top {
        if gaps_left == 0 && closed_under_addition(member) {
            out.push(atoms_of(member));
        }
        return;
    }
    let remaining = top - cursor + 1;
    if gaps_left > remaining {
        return;
    }
    // Try cursor as a gap: impossible if two members already sum to it.
    if gaps_left > 0 {
        let forced = (1..cursor).any(|x| x <= cursor - x && member[x] && member[cursor - x]);
        if !forced {
            member[cursor] = false;
            search_gap_sets(member, cursor + 1, gaps_left - 1, top, out);
            member[cursor] = true;
        }
    }
    // Try cursor as a member.
    if remaining > gaps_left {
        search_gap_sets(member, cursor + 1, gaps_left, top, out);
    }
}

fn closed_under_addition(member: &[bool]) -> bool {
    let top = member.len() - 1;
    for x in 1..=top {
        if !member[x] {
            continue;
        }
        for y in x..=top - x {
            if member[y] && !member[x + y] {
                return false;
            }
        }
    }
    true
}

/// Minimal generators from a membership table that is exact on
/// `[0, len)` and all-true beyond.
fn atoms_of(member: &[bool]) -> Vec<u64> {
    let top = member.len() - 1;
    let m = (1..=top).find(|&n| member[n]).unwrap_or(top + 1);
    let is_member = |n: usize| n > top || member[n];
    // Atoms are bounded by frobenius + multiplicity <= top + m.
    let mut atoms = Vec::new();
    for n in 1..=top + m {
        if !is_member(n) {
            continue;
        }
        let decomposable = (m..=n / 2).any(|s| is_member(s) && is_member(n - s));
        if !decomposable {
            atoms.push(n as u64);
        }
    }
    atoms
}
