use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest poset stored as an explicit order relation.
pub const MAX_EXPLICIT_POSET: usize = 1 << 13;

/// A finite poset on `0..n`, stored as up-set bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `up[x]` has bit `y` iff `x ≤ y`.
    up: Vec<Vec<u64>>,
    /// A linear extension: `x ≤ y` implies `x` comes no later than `y`.
    linear: Vec<usize>,
}

fn bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

impl Poset {
    /// Builds the poset whose order is `leq`, checking reflexivity,
    /// antisymmetry and transitivity.
    pub fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        if n > MAX_EXPLICIT_POSET {
            return Err(Error::limit("explicit poset size", MAX_EXPLICIT_POSET, n));
        }
        let words = n.div_ceil(64);
        let mut up = vec![vec![0u64; words]; n];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if leq(x, y) {
                    set(row, y);
                }
            }
        }
        let p = Poset::from_up_sets(n, up)?;
        for x in 0..n {
            for y in p.up_set(x) {
                let closed = p.up[y].iter().zip(&p.up[x]).all(|(wy, wx)| wy & !wx == 0);
                if !closed {
                    return Err(Error::InvalidArgument(format!(
                        "order is not transitive above {x} ≤ {y}"
                    )));
                }
            }
        }
        Ok(p)
    }

    /// The reflexive-transitive closure of `relations` (pairs `x ≤ y`).
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if n > MAX_EXPLICIT_POSET {
            return Err(Error::limit("explicit poset size", MAX_EXPLICIT_POSET, n));
        }
        let words = n.div_ceil(64);
        let mut up = vec![vec![0u64; words]; n];
        for (x, row) in up.iter_mut().enumerate() {
            set(row, x);
        }
        for &(x, y) in relations {
            if x >= n || y >= n {
                return Err(Error::InvalidArgument(format!(
                    "pair ({x},{y}) out of range"
                )));
            }
            set(&mut up[x], y);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if bit(row, k) {
                    for (w, r) in row.iter_mut().zip(&row_k) {
                        *w |= r;
                    }
                }
            }
        }
        Poset::from_up_sets(n, up)
    }

    fn from_up_sets(n: usize, up: Vec<Vec<u64>>) -> Result<Poset> {
        for x in 0..n {
            if !bit(&up[x], x) {
                return Err(Error::InvalidArgument(format!(
                    "order is not reflexive at {x}"
                )));
            }
            for y in x + 1..n {
                if bit(&up[x], y) && bit(&up[y], x) {
                    return Err(Error::InvalidArgument(format!(
                        "order is not antisymmetric: {x} and {y}"
                    )));
                }
            }
        }
        // Elements with larger up-sets first: x < y implies up(y) ⊊ up(x).
        let sizes: Vec<u32> = up
            .iter()
            .map(|r| r.iter().map(|w| w.count_ones()).sum())
            .collect();
        let mut linear: Vec<usize> = (0..n).collect();
        linear.sort_by_key(|&x| std::cmp::Reverse(sizes[x]));
        Ok(Poset { n, up, linear })
    }

    /// The chain `0 < 1 < … < n−1`.
    pub fn chain(n: usize) -> Poset {
        Poset::new(n, |x, y| x <= y).expect("a chain is a poset")
    }

    /// Subsets of an `n`-set ordered by inclusion.
    pub fn boolean_lattice(n: usize) -> Result<Poset> {
        Poset::new(1 << n, |x, y| x & y == x)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        bit(&self.up[x], y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Elements `y ≥ x`, ascending by index.
    pub fn up_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.leq(x, y))
    }

    /// A linear extension of the order.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    /// The unique maximum, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.n).find(|&t| (0..self.n).all(|x| self.leq(x, t)))
    }

    /// The unique minimum, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.n).find(|&b| (0..self.n).all(|x| self.leq(b, x)))
    }

    /// Covering pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.up_set(x).filter(|&y| y != x) {
                let between = self.up_set(x).any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// `μ(x, y)` for every `x ≤ y`, by `μ(y,y) = 1` and
    /// `μ(x,y) = −Σ_{x<z≤y} μ(z,y)`; zero elsewhere.
    pub fn mobius_column(&self, y: usize) -> Result<Vec<i64>> {
        let mut mu = vec![0i64; self.n];
        mu[y] = 1;
        // Reverse linear order visits every z > x before x.
        for &x in self.linear.iter().rev() {
            if x == y || !self.leq(x, y) {
                continue;
            }
            let mut sum: i64 = 0;
            for z in self.up_set(x) {
                if z != x && self.leq(z, y) {
                    sum = sum.checked_add(mu[z]).ok_or_else(overflow)?;
                }
            }
            mu[x] = sum.checked_neg().ok_or_else(overflow)?;
        }
        Ok(mu)
    }
}

fn overflow() -> Error {
    Error::InvariantViolated("Möbius value does not fit in 64 bits".into())
}

/// `μ(x, y)` on a finite poset, by the recursion
/// `μ(x,x) = 1`, `μ(x,y) = −Σ_{x≤z<y} μ(x,z)`.
pub fn mobius(p: &Poset, x: usize, y: usize) -> Result<i64> {
    if x >= p.len() || y >= p.len() {
        return Err(Error::InvalidArgument(format!(
            "element out of range: {x}, {y}"
        )));
    }
    if !p.leq(x, y) {
        return Err(Error::NotComparable(format!("{x} is not below {y}")));
    }
    let mut mu = vec![0i64; p.len()];
    mu[x] = 1;
    for &z in p.linear_extension() {
        if z == x || !p.leq(x, z) || !p.leq(z, y) {
            continue;
        }
        let mut sum: i64 = 0;
        for w in p.up_set(x) {
            if w != z && p.leq(w, z) {
                sum = sum.checked_add(mu[w]).ok_or_else(overflow)?;
            }
        }
        mu[z] = sum.checked_neg().ok_or_else(overflow)?;
    }
    Ok(mu[y])
}

/// `f2(y) = Σ_{x≤y} f1(x)·μ(x,y)`, the unique `f2` with
/// `f1(y) = Σ_{x≤y} f2(x)`.
pub fn mobius_invert(p: &Poset, f1: &[BigRational]) -> Result<Vec<BigRational>> {
    if f1.len() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values for a poset of {} elements",
            f1.len(),
            p.len()
        )));
    }
    (0..p.len())
        .map(|y| {
            let mu = p.mobius_column(y)?;
            let mut acc = BigRational::zero();
            for (x, &m) in mu.iter().enumerate() {
                if m != 0 {
                    acc += &f1[x] * BigRational::from_integer(m.into());
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `g(y) = Σ_{x≤y} f(x)`, the inverse of [`mobius_invert`].
pub fn sum_below(p: &Poset, f: &[BigRational]) -> Result<Vec<BigRational>> {
    if f.len() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values for a poset of {} elements",
            f.len(),
            p.len()
        )));
    }
    Ok((0..p.len())
        .map(|y| {
            (0..p.len())
                .filter(|&x| p.leq(x, y))
                .fold(BigRational::zero(), |acc, x| acc + &f[x])
        })
        .collect())
}

/// Rational-valued functions on the pairs `x ≤ y` of a poset, with the
/// convolution product `(f*g)(x,y) = Σ_{x≤z≤y} f(x,z)·g(z,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceAlgebra {
    poset: Poset,
    /// Row-major `n × n`; zero off the order relation.
    values: Vec<BigRational>,
}

impl IncidenceAlgebra {
    /// `f(x,y)` from `value` on comparable pairs, zero elsewhere.
    pub fn from_fn(
        poset: &Poset,
        mut value: impl FnMut(usize, usize) -> BigRational,
    ) -> IncidenceAlgebra {
        let n = poset.len();
        let mut values = vec![BigRational::zero(); n * n];
        for x in 0..n {
            for y in poset.up_set(x) {
                values[x * n + y] = value(x, y);
            }
        }
        IncidenceAlgebra {
            poset: poset.clone(),
            values,
        }
    }

    pub fn zeta(poset: &Poset) -> IncidenceAlgebra {
        IncidenceAlgebra::from_fn(poset, |_, _| BigRational::one())
    }

    pub fn delta(poset: &Poset) -> IncidenceAlgebra {
        IncidenceAlgebra::from_fn(poset, |x, y| {
            if x == y {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// The Möbius function as an element of the algebra.
    pub fn mobius(poset: &Poset) -> Result<IncidenceAlgebra> {
        let n = poset.len();
        let mut values = vec![BigRational::zero(); n * n];
        for y in 0..n {
            for (x, m) in poset.mobius_column(y)?.into_iter().enumerate() {
                if m != 0 {
                    values[x * n + y] = BigRational::from_integer(m.into());
                }
            }
        }
        Ok(IncidenceAlgebra {
            poset: poset.clone(),
            values,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn get(&self, x: usize, y: usize) -> &BigRational {
        &self.values[x * self.poset.len() + y]
    }

    /// Sets `f(x,y)`; only comparable pairs may carry non-zero values.
    pub fn set(&mut self, x: usize, y: usize, value: BigRational) -> Result<()> {
        if !self.poset.leq(x, y) && !value.is_zero() {
            return Err(Error::NotComparable(format!("{x} is not below {y}")));
        }
        let n = self.poset.len();
        self.values[x * n + y] = value;
        Ok(())
    }

    pub fn convolve(&self, other: &IncidenceAlgebra) -> Result<IncidenceAlgebra> {
        if self.poset != other.poset {
            return Err(Error::InvalidArgument(
                "convolution of functions on different posets".into(),
            ));
        }
        let p = &self.poset;
        Ok(IncidenceAlgebra::from_fn(p, |x, y| {
            p.up_set(x)
                .filter(|&z| p.leq(z, y))
                .fold(BigRational::zero(), |acc, z| {
                    acc + self.get(x, z) * other.get(z, y)
                })
        }))
    }

    /// Two-sided convolution inverse; exists iff `f(x,x) ≠ 0` for all `x`.
    pub fn inverse(&self) -> Result<IncidenceAlgebra> {
        let p = &self.poset;
        let n = p.len();
        if let Some(x) = (0..n).find(|&x| self.get(x, x).is_zero()) {
            return Err(Error::InvalidArgument(format!(
                "not invertible: f({x},{x}) = 0"
            )));
        }
        // g(x,x) = 1/f(x,x); g(x,y) = −(1/f(y,y)) Σ_{x≤z<y} g(x,z) f(z,y).
        let mut values = vec![BigRational::zero(); n * n];
        for x in 0..n {
            for &y in p.linear_extension() {
                if !p.leq(x, y) {
                    continue;
                }
                let v = if x == y {
                    self.get(x, x).recip()
                } else {
                    let s = p
                        .up_set(x)
                        .filter(|&z| z != y && p.leq(z, y))
                        .fold(BigRational::zero(), |acc, z| {
                            acc + &values[x * n + z] * self.get(z, y)
                        });
                    -s / self.get(y, y)
                };
                values[x * n + y] = v;
            }
        }
        Ok(IncidenceAlgebra {
            poset: p.clone(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotposet::partition::partitions;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn partition_lattice(n: usize) -> (Vec<crate::quotposet::Partition>, Poset) {
        let parts: Vec<_> = partitions(n).collect();
        let p = Poset::new(parts.len(), |x, y| parts[x].refines(&parts[y])).unwrap();
        (parts, p)
    }

    #[test]
    fn mobius_basics() {
        let c = Poset::chain(2);
        assert_eq!(mobius(&c, 0, 0).unwrap(), 1);
        assert_eq!(mobius(&c, 0, 1).unwrap(), -1);
        assert!(matches!(mobius(&c, 1, 0), Err(Error::NotComparable(_))));
        let c5 = Poset::chain(5);
        assert_eq!(mobius(&c5, 0, 4).unwrap(), 0);
    }

    #[test]
    fn partition_lattice_of_three() {
        let (parts, p) = partition_lattice(3);
        let bottom = parts.iter().position(|x| x.is_discrete()).unwrap();
        let top = parts.iter().position(|x| x.block_count() == 1).unwrap();
        assert_eq!(p.bottom(), Some(bottom));
        assert_eq!(p.top(), Some(top));
        assert_eq!(mobius(&p, bottom, top).unwrap(), 2);
        // μ(0̂, 1̂) on Π_n is (−1)^{n−1}(n−1)!.
        let (parts, p) = partition_lattice(5);
        let b = parts.iter().position(|x| x.is_discrete()).unwrap();
        assert_eq!(mobius(&p, b, 0).unwrap(), 24);
    }

    #[test]
    fn boolean_lattice_mobius() {
        let p = Poset::boolean_lattice(4).unwrap();
        for x in 0..16usize {
            for y in 0..16usize {
                if x & y == x {
                    let sign = if (y & !x).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(mobius(&p, x, y).unwrap(), sign);
                    assert_eq!(p.mobius_column(y).unwrap()[x], sign);
                }
            }
        }
    }

    #[test]
    fn rejects_non_orders() {
        assert!(Poset::new(2, |_, _| true).is_err());
        assert!(Poset::new(2, |x, y| x < y).is_err());
        assert!(Poset::new(3, |x, y| x == y || (x, y) == (0, 1) || (x, y) == (1, 2)).is_err());
        assert!(Poset::from_relations(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn inversion_example_on_two_point_quotients() {
        // Quotients of a 2-set ordered by factorization: the collapse
        // (index 0) lies below the identity (index 1).
        let parts: Vec<_> = partitions(2).collect();
        let p = Poset::new(2, |x, y| parts[y].refines(&parts[x])).unwrap();
        let f2 = mobius_invert(&p, &[q(3), q(9)]).unwrap();
        assert_eq!(f2[1], q(6));
        assert_eq!(mobius_invert(&p, &[q(0), q(0)]).unwrap(), vec![q(0), q(0)]);
    }

    #[test]
    fn hasse_edges_of_a_diamond() {
        let p = Poset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let mut e = p.hasse_edges();
        e.sort();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(mobius(&p, 0, 3).unwrap(), 1);
    }

    #[test]
    fn incidence_algebra_identities() {
        let (_, p) = partition_lattice(4);
        let zeta = IncidenceAlgebra::zeta(&p);
        let mu = IncidenceAlgebra::mobius(&p).unwrap();
        let delta = IncidenceAlgebra::delta(&p);
        assert_eq!(mu.convolve(&zeta).unwrap(), delta);
        assert_eq!(zeta.convolve(&mu).unwrap(), delta);
        assert_eq!(zeta.inverse().unwrap(), mu);
        let mut f = IncidenceAlgebra::zeta(&p);
        assert!(f.set(0, p.len() - 1, q(1)).is_err());
        f.set(0, 0, q(0)).unwrap();
        assert!(f.inverse().is_err());
    }

    fn arb_poset() -> impl Strategy<Value = Poset> {
        (1usize..9)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..12)))
            .prop_map(|(n, pairs)| {
                // Orient every pair upward so the closure stays antisymmetric.
                let rel: Vec<_> = pairs
                    .into_iter()
                    .filter(|(x, y)| x != y)
                    .map(|(x, y)| (x.min(y), x.max(y)))
                    .collect();
                Poset::from_relations(n, &rel).unwrap()
            })
    }

    proptest! {
        #[test]
        fn inversion_round_trips(p in arb_poset(), seed in proptest::collection::vec(-20i64..20, 8)) {
            let f1: Vec<_> = (0..p.len()).map(|i| q(seed[i % seed.len()])).collect();
            let f2 = mobius_invert(&p, &f1).unwrap();
            prop_assert_eq!(sum_below(&p, &f2).unwrap(), f1);
        }

        #[test]
        fn mobius_inverts_zeta(p in arb_poset()) {
            let zeta = IncidenceAlgebra::zeta(&p);
            let mu = IncidenceAlgebra::mobius(&p).unwrap();
            prop_assert_eq!(mu.convolve(&zeta).unwrap(), IncidenceAlgebra::delta(&p));
            for x in 0..p.len() {
                for y in p.up_set(x) {
                    prop_assert_eq!(q(mobius(&p, x, y).unwrap()), mu.get(x, y).clone());
                }
            }
        }
    }
}
