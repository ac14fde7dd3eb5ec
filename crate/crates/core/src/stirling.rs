//! Generic elements of hom-sets, the kernel decomposition of `hom(c, a)`
//! over the quotient poset, and Stirling numbers of the second kind.
//!
//! A hom `h: c → a` is degenerate when it factors as `h'∘q` through a proper
//! quotient `q: c ↠ m`, and generic otherwise. Since `q` is surjective, `h`
//! factors through `q` iff `h` is constant on the blocks of `q` and the
//! induced block map sends the relations of `m` into `a`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::homsearch::{HomSearch, MorphismClass};
use crate::quotposet::{quotient_poset, Partition};
use crate::sigstruct::{
    canonical_form, check_same_signature, induced_quotient, FactorisationSystem, Structure,
};
use crate::{Count, Error, Result};

/// `S(n, m)`: partitions of an `n`-set into `m` non-empty blocks.
pub fn stirling_number(n: usize, m: usize) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    // Row k holds S(k, 0..=m).
    let mut row = vec![BigUint::zero(); m + 1];
    row[0] = BigUint::one();
    for _ in 0..n {
        for j in (1..=m).rev() {
            row[j] = &row[j] * j + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[m].clone()
}

/// `a·(a−1)···(a−m+1)`.
pub fn falling_factorial(a: usize, m: usize) -> BigUint {
    if m > a {
        return BigUint::zero();
    }
    (0..m).fold(BigUint::one(), |acc, i| acc * (a - i))
}

/// "Factors through `c ↠ m`" for one quotient `m`, in terms of `c`'s elements.
#[derive(Debug, Clone)]
struct FactorTest {
    /// Pairs that `h` must identify: consecutive members of each block.
    equal: Vec<(usize, usize)>,
    /// Tuples of `m`, written with a representative element per block,
    /// whose images must hold in the target.
    tuples: Vec<(usize, Vec<usize>)>,
}

impl FactorTest {
    fn new(partition: &Partition, codomain: &Structure) -> FactorTest {
        let blocks = partition.blocks();
        let equal = blocks
            .iter()
            .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
            .collect();
        let sig = codomain.signature();
        let tuples = (0..sig.len())
            .flat_map(|rel| {
                let blocks = &blocks;
                codomain
                    .tuples(rel)
                    .map(move |t| (rel, t.iter().map(|&b| blocks[b][0]).collect()))
            })
            .collect();
        FactorTest { equal, tuples }
    }

    fn factors(&self, h: &[usize], a: &Structure) -> bool {
        self.equal.iter().all(|&(x, y)| h[x] == h[y])
            && self.tuples.iter().all(|(rel, t)| {
                let image: Vec<usize> = t.iter().map(|&x| h[x]).collect();
                a.holds(*rel, &image)
            })
    }
}

/// Counts the generic homs out of a fixed source.
///
/// Degeneracy is tested against a family of proper quotients that every
/// proper quotient lies below (factoring through `x ≤ y` implies factoring
/// through `y`): the quotients identifying one pair of elements with image
/// relations, and under `ESm` also the identity partition with one extra
/// tuple added to the codomain.
#[derive(Debug, Clone)]
pub struct GenericCounter {
    search: HomSearch,
    tests: Vec<FactorTest>,
}

impl GenericCounter {
    pub fn new(c: &Structure, system: FactorisationSystem) -> Result<GenericCounter> {
        let n = c.size();
        let mut tests = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                let rgs: Vec<usize> = (0..n)
                    .map(|z| match z {
                        _ if z == y => x,
                        _ if z > y => z - 1,
                        _ => z,
                    })
                    .collect();
                let partition = Partition::from_rgs(rgs)?;
                let image = induced_quotient(c, partition.rgs(), n - 1)?;
                tests.push(FactorTest::new(&partition, &image));
            }
        }
        if system == FactorisationSystem::ESm {
            let identity = Partition::discrete(n);
            let sig = c.signature();
            for rel in 0..sig.len() {
                let slots = crate::sigstruct::slot_count(n, sig.arity(rel))?;
                let mut t = vec![0; sig.arity(rel)];
                for slot in 0..slots {
                    if !c.holds_index(rel, slot) {
                        crate::sigstruct::decode_index(slot, n, &mut t);
                        let mut m = c.clone();
                        m.insert(rel, &t)?;
                        tests.push(FactorTest::new(&identity, &m));
                    }
                }
            }
        }
        Ok(GenericCounter {
            search: HomSearch::new(c, MorphismClass::Hom, system),
            tests,
        })
    }

    pub fn source(&self) -> &Structure {
        self.search.domain()
    }

    /// Whether the hom `h` (given as a map) is generic.
    pub fn is_generic(&self, h: &[usize], a: &Structure) -> bool {
        !self.tests.iter().any(|t| t.factors(h, a))
    }

    pub fn count(&self, a: &Structure) -> Result<Count> {
        let mut n = Count::zero();
        self.search.for_each(a, |h| {
            if self.is_generic(h, a) {
                n += 1u32;
            }
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }

    pub fn count_u64(&self, a: &Structure) -> Result<u64> {
        let mut n = 0u64;
        self.search.for_each(a, |h| {
            if self.is_generic(h, a) {
                n += 1;
            }
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }
}

/// Number of `h ∈ hom(c, a)` factoring through no proper quotient of `c`.
pub fn generic_count(c: &Structure, a: &Structure, system: FactorisationSystem) -> Result<Count> {
    check_same_signature(c, a)?;
    GenericCounter::new(c, system)?.count(a)
}

/// One class of `Q(c)` with the generic homs out of its codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelRow {
    pub partition: Partition,
    pub codomain: Structure,
    pub generic: Count,
}

/// `hom(c, a) ≅ ⊔_{q ∈ Q(c)} Sk(hom(−, a))(m_q)`, with counts.
#[derive(Debug, Clone)]
pub struct KernelDecomposition {
    pub source: Structure,
    pub target: Structure,
    pub system: FactorisationSystem,
    pub rows: Vec<KernelRow>,
    pub total: Count,
    pub homcount: Count,
}

/// Splits `hom(c, a)` by the quotient each hom factors through generically.
///
/// Fails with `InvariantViolated` if the rows do not add up to `|hom(c,a)|`.
pub fn kernel_decomposition(
    c: &Structure,
    a: &Structure,
    system: FactorisationSystem,
) -> Result<KernelDecomposition> {
    check_same_signature(c, a)?;
    let q = quotient_poset(c, system)?;
    let mut cache: HashMap<_, Count> = HashMap::new();
    let mut rows = Vec::with_capacity(q.len());
    let mut total = Count::zero();
    for i in 0..q.len() {
        let codomain = q.codomain(i);
        let key = canonical_form(&codomain)?;
        let generic = match cache.get(&key) {
            Some(g) => g.clone(),
            None => {
                let g = generic_count(&codomain, a, system)?;
                cache.insert(key, g.clone());
                g
            }
        };
        total += &generic;
        rows.push(KernelRow {
            partition: q.partition(i).clone(),
            codomain,
            generic,
        });
    }
    let homcount = HomSearch::new(c, MorphismClass::Hom, system).count(a)?;
    if total != homcount {
        return Err(Error::InvariantViolated(format!(
            "kernel decomposition sums to {total} but there are {homcount} homs"
        )));
    }
    Ok(KernelDecomposition {
        source: c.clone(),
        target: a.clone(),
        system,
        rows,
        total,
        homcount,
    })
}
