//! Set partitions of `[n] = {1, ..., n}` and the non-crossing lattice.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate`].
pub const DEFAULT_MAX_N: usize = 10;

/// A set partition of `[n]`. Blocks are sorted and ordered by their minimum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionFamily {
    All,
    NonCrossing,
    Interval,
    /// Non-crossing with `1` and `n` in the same block.
    IrreducibleNc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `pi <= sigma`: every block of `sigma` is a union of blocks of `pi`.
    Refinement,
    /// `pi << sigma`: refinement, and each block of `sigma` has its min and
    /// max inside a single block of `pi`.
    MinMax,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestingStats {
    pub tree_factorial: BigUint,
    pub monotone_count: BigUint,
}

impl Partition {
    /// Builds a partition from 1-based blocks in any order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::domain("empty block"));
            }
            for &i in b {
                if i == 0 || i > n {
                    return Err(Error::domain(format!("element {i} outside 1..={n}")));
                }
                if seen[i] {
                    return Err(Error::domain(format!("element {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = (1..=n).find(|&i| !seen[i]) {
            return Err(Error::domain(format!("element {i} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    /// The one-block partition `1_n`.
    pub fn one(n: usize) -> Self {
        Partition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    /// The all-singletons partition `0_n`.
    pub fn zero(n: usize) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// From a label per element: equal labels share a block.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, l) in labels.iter().enumerate() {
            let b = *index.entry(*l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(pos + 1);
        }
        Partition {
            n: labels.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// 0-based block index of each element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i - 1] = b;
            }
        }
        labels
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &i| m | 1 << (i - 1)))
            .collect()
    }

    pub fn is_noncrossing(&self) -> bool {
        // a < b < c < d with a, c in one block and b, d in another.
        let labels = self.labels();
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                if labels[b] == labels[a] {
                    continue;
                }
                for c in b + 1..n {
                    if labels[c] != labels[a] {
                        continue;
                    }
                    if (c + 1..n).any(|d| labels[d] == labels[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_interval(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b[b.len() - 1] - b[0] + 1 == b.len())
    }

    /// Non-crossing with `1` and `n` in one block.
    pub fn is_irreducible(&self) -> bool {
        self.n > 0 && self.blocks[0].last() == Some(&self.n) && self.is_noncrossing()
    }

    pub fn in_family(&self, family: PartitionFamily) -> bool {
        match family {
            PartitionFamily::All => true,
            PartitionFamily::NonCrossing => self.is_noncrossing(),
            PartitionFamily::Interval => self.is_interval(),
            PartitionFamily::IrreducibleNc => self.is_irreducible(),
        }
    }

    /// Number of blocks lying inside the span `[min V, max V]`, per block.
    pub fn nesting_depths(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|v| {
                let (lo, hi) = (v[0], v[v.len() - 1]);
                self.blocks
                    .iter()
                    .filter(|w| w[0] >= lo && w[w.len() - 1] <= hi)
                    .count()
            })
            .collect()
    }

    fn check_noncrossing(&self) -> Result<()> {
        if self.is_noncrossing() {
            Ok(())
        } else {
            Err(Error::domain(format!("{self} is crossing")))
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

static ENUM_CACHE: Cache<(usize, PartitionFamily), Vec<Partition>> = OnceLock::new();
static MOBIUS_CACHE: Cache<usize, HashMap<Partition, i64>> = OnceLock::new();

fn cached<K, V>(cache: &'static Cache<K, V>, key: K, build: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq + Clone,
{
    let map = cache.get_or_init(Default::default);
    if let Some(v) = map.lock().unwrap().get(&key) {
        return v.clone();
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let value = Arc::new(build());
    map.lock()
        .unwrap()
        .entry(key)
        .or_insert(value)
        .clone()
}

/// Every partition of `[n]` in `family`, sorted canonically.
pub fn enumerate(n: usize, family: PartitionFamily) -> Result<Arc<Vec<Partition>>> {
    enumerate_with_limit(n, family, DEFAULT_MAX_N)
}

pub fn enumerate_with_limit(
    n: usize,
    family: PartitionFamily,
    max_n: usize,
) -> Result<Arc<Vec<Partition>>> {
    if n == 0 || n > max_n || n > 64 {
        return Err(Error::SizeLimit { n, max: max_n.min(64) });
    }
    Ok(cached(&ENUM_CACHE, (n, family), || {
        let mut list = match family {
            PartitionFamily::All => all_partitions(n),
            PartitionFamily::NonCrossing => noncrossing(n),
            PartitionFamily::Interval => intervals(n),
            PartitionFamily::IrreducibleNc => noncrossing(n)
                .into_iter()
                .filter(|p| p.blocks[0].last() == Some(&n))
                .collect(),
        };
        list.sort();
        list
    }))
}

/// Restricted growth strings.
fn all_partitions(n: usize) -> Vec<Partition> {
    fn go(labels: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if labels.len() == n {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max + 1 {
            labels.push(l);
            go(labels, max.max(l), n, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    let mut labels = vec![0];
    go(&mut labels, 0, n, &mut out);
    out
}

/// Non-crossing partitions built from the block of the first element: the
/// gaps it leaves are independent smaller non-crossing problems.
fn noncrossing(n: usize) -> Vec<Partition> {
    fn blocks_of(lo: usize, len: usize) -> Vec<Vec<Vec<usize>>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for mask in 0u64..1 << (len - 1) {
            let mut first = vec![lo];
            first.extend((0..len - 1).filter(|b| mask >> b & 1 == 1).map(|b| lo + 1 + b));
            let mut gaps = Vec::new();
            for w in first.windows(2) {
                gaps.push((w[0] + 1, w[1] - w[0] - 1));
            }
            let last = first[first.len() - 1];
            gaps.push((last + 1, lo + len - 1 - last));
            let mut partial = vec![vec![first]];
            for (start, glen) in gaps {
                let fills = blocks_of(start, glen);
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        fills.iter().map(move |f| {
                            let mut q = p.clone();
                            q.extend(f.iter().cloned());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        out
    }
    blocks_of(1, n)
        .into_iter()
        .map(|mut blocks| {
            blocks.sort_unstable_by_key(|b| b[0]);
            Partition { n, blocks }
        })
        .collect()
}

/// Interval partitions correspond to compositions of `n`.
fn intervals(n: usize) -> Vec<Partition> {
    (0u64..1 << (n - 1))
        .map(|cuts| {
            let mut blocks = vec![vec![1]];
            for i in 2..=n {
                if cuts >> (i - 2) & 1 == 1 {
                    blocks.push(vec![i]);
                } else {
                    blocks.last_mut().unwrap().push(i);
                }
            }
            Partition { n, blocks }
        })
        .collect()
}

/// Compares two partitions of the same ground set.
pub fn compare(pi: &Partition, sigma: &Partition, order: Order) -> Result<bool> {
    if pi.n != sigma.n {
        return Err(Error::dimension(format!(
            "partitions of [{}] and [{}]",
            pi.n, sigma.n
        )));
    }
    let refined = refines(&pi.masks(), &sigma.labels(), &sigma.masks());
    Ok(match order {
        Order::Refinement => refined,
        Order::MinMax => {
            let labels = pi.labels();
            refined
                && sigma
                    .blocks
                    .iter()
                    .all(|w| labels[w[0] - 1] == labels[w[w.len() - 1] - 1])
        }
    })
}

/// Whether the partition with block masks `fine` refines the one with
/// `coarse_labels` and `coarse_masks`.
fn refines(fine: &[u64], coarse_labels: &[usize], coarse_masks: &[u64]) -> bool {
    fine.iter().all(|&m| {
        let l = coarse_labels[m.trailing_zeros() as usize];
        m & coarse_masks[l] == m
    })
}

pub fn nesting_stats(pi: &Partition) -> Result<NestingStats> {
    pi.check_noncrossing()?;
    let tree_factorial: BigUint = pi.nesting_depths().into_iter().map(BigUint::from).product();
    let fact: BigUint = (1..=pi.block_count()).map(BigUint::from).product();
    Ok(NestingStats {
        monotone_count: fact / &tree_factorial,
        tree_factorial,
    })
}

/// `Mob(sigma, 1_n)` on the non-crossing lattice.
pub fn mobius_to_top(sigma: &Partition) -> Result<i64> {
    sigma.check_noncrossing()?;
    let table = mobius_table(sigma.n)?;
    Ok(table[sigma])
}

/// `Mob(pi, 1_n)` for every `pi` in `NC(n)`, by the recursion
/// `Mob(sigma, 1) = -sum_{sigma < pi <= 1} Mob(pi, 1)`.
pub fn mobius_table(n: usize) -> Result<Arc<HashMap<Partition, i64>>> {
    let list = enumerate(n, PartitionFamily::NonCrossing)?;
    Ok(cached(&MOBIUS_CACHE, n, || {
        let mut order: Vec<&Partition> = list.iter().collect();
        order.sort_by_key(|p| p.block_count());
        let data: Vec<(Vec<u64>, Vec<usize>, Vec<u64>)> = order
            .iter()
            .map(|p| (p.masks(), p.labels(), p.masks()))
            .collect();
        let mut mu = vec![0i64; order.len()];
        for s in 0..order.len() {
            if order[s].block_count() == 1 {
                mu[s] = 1;
                continue;
            }
            let fine = &data[s].0;
            let mut acc = 0;
            for p in 0..s {
                if order[p].block_count() >= order[s].block_count() {
                    break;
                }
                if refines(fine, &data[p].1, &data[p].2) {
                    acc += mu[p];
                }
            }
            mu[s] = -acc;
        }
        order.into_iter().cloned().zip(mu).collect()
    }))
}

/// Number of `pi` in `NC(n)` with `pi >> sigma` and `p` blocks, which is
/// `binom(|sigma| - 1, p - 1)` for irreducible `sigma`.
pub fn count_above_irreducible(sigma: &Partition, p: usize) -> Result<BigUint> {
    if !sigma.is_irreducible() {
        return Err(Error::domain(format!("{sigma} is not irreducible")));
    }
    let k = sigma.block_count();
    if p == 0 || p > k {
        return Err(Error::domain(format!("block count {p} outside 1..={k}")));
    }
    Ok(binomial(k - 1, p - 1))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// All monotone labelings of a non-crossing partition: bijections from blocks
/// (in canonical order) to `1..=|pi|` where a nested block gets a larger label
/// than the block around it. Exponential; intended for cross-checks.
pub fn monotone_labelings(pi: &Partition) -> Result<Vec<Vec<usize>>> {
    pi.check_noncrossing()?;
    let k = pi.block_count();
    let inside = |inner: usize, outer: usize| {
        let (v, w) = (&pi.blocks[inner], &pi.blocks[outer]);
        inner != outer && v[0] > w[0] && v[v.len() - 1] < w[w.len() - 1]
    };
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (1..=k).collect();
    permutations(&mut perm, 0, &mut |labels| {
        let ok = (0..k).all(|i| (0..k).all(|j| !inside(i, j) || labels[j] < labels[i]));
        if ok {
            out.push(labels.to_vec());
        }
    });
    Ok(out)
}

fn permutations(v: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == v.len() {
        visit(v);
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permutations(v, start + 1, visit);
        v.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn catalan(n: usize) -> usize {
        (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(*enumerate(1, PartitionFamily::All).unwrap(), vec![Partition::one(1)]);
        let nc4 = enumerate(4, PartitionFamily::NonCrossing).unwrap();
        assert_eq!(nc4.len(), 14);
        assert!(!nc4.contains(&p(4, &[&[1, 3], &[2, 4]])));
        assert_eq!(enumerate(4, PartitionFamily::Interval).unwrap().len(), 8);
        let irr3 = enumerate(3, PartitionFamily::IrreducibleNc).unwrap();
        let mut expect = vec![Partition::one(3), p(3, &[&[1, 3], &[2]])];
        expect.sort();
        assert_eq!(*irr3, expect);
    }

    #[test]
    fn families_match_filters() {
        for n in 1..=7 {
            let all = enumerate(n, PartitionFamily::All).unwrap();
            for fam in [
                PartitionFamily::NonCrossing,
                PartitionFamily::Interval,
                PartitionFamily::IrreducibleNc,
            ] {
                let filtered: Vec<_> = all.iter().filter(|q| q.in_family(fam)).cloned().collect();
                assert_eq!(*enumerate(n, fam).unwrap(), filtered, "n={n} {fam:?}");
            }
            assert_eq!(enumerate(n, PartitionFamily::NonCrossing).unwrap().len(), catalan(n));
            assert_eq!(enumerate(n, PartitionFamily::Interval).unwrap().len(), 1 << (n - 1));
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            enumerate(0, PartitionFamily::All),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            enumerate(11, PartitionFamily::NonCrossing),
            Err(Error::SizeLimit { n: 11, max: 10 })
        ));
        assert_eq!(
            enumerate_with_limit(11, PartitionFamily::Interval, 12).unwrap().len(),
            1024
        );
    }

    #[test]
    fn construction_validates() {
        assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 2], vec![2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 3]]).is_err());
        assert_eq!(
            Partition::new(3, vec![vec![2], vec![3, 1]]).unwrap(),
            Partition::from_labels(&[7, 4, 7])
        );
    }

    #[test]
    fn order_examples() {
        let (z, o) = (Partition::zero(3), Partition::one(3));
        assert!(compare(&z, &o, Order::Refinement).unwrap());
        assert!(!compare(&o, &z, Order::Refinement).unwrap());
        assert!(compare(&p(3, &[&[1, 3], &[2]]), &o, Order::MinMax).unwrap());
        assert!(!compare(&z, &o, Order::MinMax).unwrap());
        assert!(matches!(
            compare(&z, &Partition::one(2), Order::Refinement),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn minmax_implies_refinement() {
        for n in 1..=6 {
            let nc = enumerate(n, PartitionFamily::NonCrossing).unwrap();
            for a in nc.iter() {
                for b in nc.iter() {
                    if compare(a, b, Order::MinMax).unwrap() {
                        assert!(compare(a, b, Order::Refinement).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn nesting_examples() {
        let s = nesting_stats(&Partition::one(5)).unwrap();
        assert_eq!((s.tree_factorial, s.monotone_count), (1u8.into(), 1u8.into()));
        let s = nesting_stats(&Partition::zero(4)).unwrap();
        assert_eq!((s.tree_factorial, s.monotone_count), (1u8.into(), 24u8.into()));
        let s = nesting_stats(&p(4, &[&[1, 4], &[2], &[3]])).unwrap();
        assert_eq!((s.tree_factorial, s.monotone_count), (3u8.into(), 2u8.into()));
        assert!(nesting_stats(&p(4, &[&[1, 3], &[2, 4]])).is_err());
    }

    #[test]
    fn monotone_count_matches_labelings() {
        for n in 1..=6 {
            for q in enumerate(n, PartitionFamily::NonCrossing).unwrap().iter() {
                let count = monotone_labelings(q).unwrap().len();
                assert_eq!(nesting_stats(q).unwrap().monotone_count, BigUint::from(count));
            }
        }
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius_to_top(&Partition::one(4)).unwrap(), 1);
        assert_eq!(mobius_to_top(&Partition::zero(2)).unwrap(), -1);
        assert_eq!(mobius_to_top(&Partition::zero(3)).unwrap(), 2);
        for n in 1..=7 {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(
                mobius_to_top(&Partition::zero(n)).unwrap(),
                sign * catalan(n - 1) as i64
            );
            if n >= 2 {
                assert_eq!(mobius_table(n).unwrap().values().sum::<i64>(), 0);
            }
        }
        assert!(mobius_to_top(&p(4, &[&[1, 3], &[2, 4]])).is_err());
    }

    #[test]
    fn counts_above_irreducible() {
        assert_eq!(count_above_irreducible(&Partition::one(4), 1).unwrap(), 1u8.into());
        assert!(count_above_irreducible(&Partition::zero(3), 1).is_err());
        assert!(count_above_irreducible(&Partition::one(3), 2).is_err());
        for n in 1..=6 {
            let nc = enumerate(n, PartitionFamily::NonCrossing).unwrap();
            for sigma in enumerate(n, PartitionFamily::IrreducibleNc).unwrap().iter() {
                let mut alt = 0i64;
                for k in 1..=sigma.block_count() {
                    let brute = nc
                        .iter()
                        .filter(|q| {
                            q.block_count() == k && compare(sigma, q, Order::MinMax).unwrap()
                        })
                        .count();
                    assert_eq!(count_above_irreducible(sigma, k).unwrap(), BigUint::from(brute));
                    alt += if k % 2 == 1 { brute as i64 } else { -(brute as i64) };
                }
                // The binomial sum collapses to 0 unless σ has a single block.
                let expect = i64::from(sigma.block_count() == 1);
                assert_eq!(alt, expect);
            }
        }
    }
}
