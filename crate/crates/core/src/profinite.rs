//! Finite groups, towers of finite groups and continuous-hom counts.
//!
//! A tower `G_0 ← G_1 ← … ← G_d` with surjective connecting maps is a
//! truncation of an inverse system; its limit is `G_d`, and a continuous hom
//! from the full inverse limit into a finite group factors through some
//! level. Counting homs level by level therefore gives a non-decreasing
//! sequence whose eventual value is the continuous-hom count. A tower only
//! sees finitely many levels, so [`TowerCount::stabilized`] records whether
//! the last two levels agreed; it is a certificate about the truncation, not
//! a proof about the infinite limit.
//!
//! The module is specific to groups.

use std::collections::VecDeque;
use std::fmt;

use crate::lovasz::{DistinguishResult, Witness};
use crate::{Count, Error, Result};

/// Largest group order accepted (associativity is checked in `O(n³)`).
pub const MAX_GROUP_ORDER: usize = 256;

/// A finite group on `0..order` given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Verifies closure, associativity, identity and inverses.
    pub fn new(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let name = name.into();
        let n = rows.len();
        let bad = |msg: String| Err(Error::InvalidGroup(format!("{name}: {msg}")));
        if n == 0 {
            return bad("order must be positive".into());
        }
        if n > MAX_GROUP_ORDER {
            return bad(format!("order {n} exceeds {MAX_GROUP_ORDER}"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return bad(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            ));
        }
        if let Some(&x) = rows.iter().flatten().find(|&&x| x >= n) {
            return bad(format!("entry {x} out of range"));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |x: usize, y: usize| table[x * n + y];
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
        else {
            return bad("no identity element".into());
        };
        let mut inverse = vec![0; n];
        for x in 0..n {
            match (0..n).find(|&y| mul(x, y) == identity && mul(y, x) == identity) {
                Some(y) => inverse[x] = y,
                None => return bad(format!("element {x} has no inverse")),
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                        return bad(format!("({x}·{y})·{z} ≠ {x}·({y}·{z})"));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name,
            order: n,
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// `Z/n` with elements `0..n` under addition mod `n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1, "cyclic group of order 0");
        let rows = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        let name = if n == 1 {
            "1".to_string()
        } else {
            format!("Z/{n}")
        };
        FiniteGroup::new(name, rows).expect("cyclic group")
    }

    /// Direct product; the pair `(x, y)` is element `x·|h| + y`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let m = h.order;
        let n = g.order * m;
        let rows = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m))
                    .collect()
            })
            .collect();
        FiniteGroup::new(format!("{}x{}", g.name, h.name), rows).expect("product of groups")
    }

    /// Product of cyclic groups of the given orders.
    pub fn abelian(orders: &[usize]) -> FiniteGroup {
        orders
            .iter()
            .map(|&k| FiniteGroup::cyclic(k))
            .reduce(|a, b| FiniteGroup::product(&a, &b))
            .unwrap_or_else(FiniteGroup::trivial)
    }

    /// The symmetric group on `k` points, permutations in lexicographic order.
    pub fn symmetric(k: usize) -> FiniteGroup {
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for i in 0..k {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..=i).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, i);
                        q
                    })
                })
                .collect();
        }
        perms.sort();
        let index = |p: &[usize]| {
            perms
                .binary_search_by(|q| q.as_slice().cmp(p))
                .expect("permutation")
        };
        let rows = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&(0..k).map(|x| p[q[x]]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        FiniteGroup::new(format!("S{k}"), rows).expect("symmetric group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteGroup {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Elements of the subgroup generated by `gens`, as a membership mask.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        member
    }

    /// A generating set chosen greedily: elements by decreasing order, each
    /// kept if it lies outside the subgroup generated so far.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (0..self.order).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut member = self.generated(&gens);
        for x in candidates {
            if !member[x] {
                gens.push(x);
                member = self.generated(&gens);
            }
        }
        gens
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// One abelian group of each isomorphism type with order at most
/// `max_order`, as products of cyclic groups of prime-power order; ordered by
/// order, then by the list of cyclic factors.
pub fn abelian_groups(max_order: usize) -> Vec<FiniteGroup> {
    fn partitions(e: u32, max_part: u32) -> Vec<Vec<u32>> {
        if e == 0 {
            return vec![Vec::new()];
        }
        (1..=e.min(max_part))
            .rev()
            .flat_map(|first| {
                partitions(e - first, first)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect()
    }
    let mut out = Vec::new();
    for n in 1..=max_order {
        let mut factor_choices: Vec<Vec<Vec<usize>>> = Vec::new();
        let (mut m, mut p) = (n, 2);
        while m > 1 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                factor_choices.push(
                    partitions(e, e)
                        .into_iter()
                        .map(|parts| parts.iter().map(|&k| p.pow(k)).collect())
                        .collect(),
                );
            }
            p += 1;
        }
        let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
        for choices in &factor_choices {
            combos = combos
                .iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut v = prefix.clone();
                        v.extend(c);
                        v
                    })
                })
                .collect();
        }
        out.extend(combos.iter().map(|orders| FiniteGroup::abelian(orders)));
    }
    out
}

/// A group homomorphism, verified on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != domain.order() || map.iter().any(|&y| y >= codomain.order()) {
            return Err(Error::InvalidMap(format!(
                "map {} → {} has the wrong length or range",
                domain, codomain
            )));
        }
        for x in 0..domain.order() {
            for y in 0..domain.order() {
                if map[domain.mul(x, y)] != codomain.mul(map[x], map[y]) {
                    return Err(Error::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            map,
        })
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        image_size(&self.map, self.codomain.order()) == self.codomain.order()
    }
}

fn image_size(map: &[usize], n: usize) -> usize {
    let mut hit = vec![false; n];
    map.iter().for_each(|&y| hit[y] = true);
    hit.iter().filter(|&&h| h).count()
}

/// Visits every hom `g → c` as an element map. Generators of `g` are
/// assigned images of compatible order; the assignment extends to a hom iff
/// `φ(x·s) = φ(x)·φ(s)` holds along every generator edge.
fn for_each_group_hom<F>(g: &FiniteGroup, c: &FiniteGroup, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let gens = g.generating_set();
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let k = g.element_order(s);
            (0..c.order())
                .filter(|&y| k.is_multiple_of(c.element_order(y)))
                .collect()
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut pick = vec![0usize; gens.len()];
    let mut map = vec![usize::MAX; g.order()];
    let mut queue = VecDeque::new();
    loop {
        map.fill(usize::MAX);
        map[g.identity()] = c.identity();
        queue.clear();
        queue.push_back(g.identity());
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let image = c.mul(map[x], choices[i][pick[i]]);
                if map[y] == usize::MAX {
                    map[y] = image;
                    queue.push_back(y);
                } else if map[y] != image {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        if ok && !visit(&map) {
            return;
        }
        // Next assignment, odometer style.
        let mut i = 0;
        loop {
            if i == gens.len() {
                return;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Number of group homs `g → c`.
pub fn count_group_homs(g: &FiniteGroup, c: &FiniteGroup) -> Count {
    let mut n = 0u64;
    for_each_group_hom(g, c, |_| {
        n += 1;
        true
    });
    Count::from(n)
}

/// All group homs `g → c`.
pub fn group_homs(g: &FiniteGroup, c: &FiniteGroup) -> Vec<GroupHom> {
    let mut out = Vec::new();
    for_each_group_hom(g, c, |m| {
        out.push(GroupHom {
            domain: g.clone(),
            codomain: c.clone(),
            map: m.to_vec(),
        });
        true
    });
    out
}

/// Some surjective hom `g ↠ c`, if any.
pub fn find_surjection(g: &FiniteGroup, c: &FiniteGroup) -> Option<GroupHom> {
    if !g.order().is_multiple_of(c.order()) {
        return None;
    }
    let mut found = None;
    for_each_group_hom(g, c, |m| {
        if image_size(m, c.order()) == c.order() {
            found = Some(m.to_vec());
            false
        } else {
            true
        }
    });
    found.map(|map| GroupHom {
        domain: g.clone(),
        codomain: c.clone(),
        map,
    })
}

/// Every isomorphism `g → h`, as element maps.
fn isomorphisms(g: &FiniteGroup, h: &FiniteGroup, mut visit: impl FnMut(&[usize]) -> bool) {
    if g.order() != h.order() {
        return;
    }
    for_each_group_hom(g, h, |m| image_size(m, h.order()) != h.order() || visit(m));
}

pub fn groups_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    let mut found = false;
    isomorphisms(g, h, |_| {
        found = true;
        false
    });
    found
}

/// A truncated inverse system `G_0 ← G_1 ← … ← G_d` with surjective
/// connecting homs `maps[i] : G_{i+1} → G_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    name: String,
    levels: Vec<FiniteGroup>,
    maps: Vec<GroupHom>,
}

impl Tower {
    /// `maps[i]` lists the images in `levels[i]` of the elements of `levels[i+1]`.
    pub fn new(
        name: impl Into<String>,
        levels: Vec<FiniteGroup>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Tower> {
        let name = name.into();
        if levels.is_empty() {
            return Err(Error::InvalidTower(format!("{name}: no levels")));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::InvalidTower(format!(
                "{name}: {} levels need {} connecting maps, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        let mut homs = Vec::with_capacity(maps.len());
        for (i, map) in maps.into_iter().enumerate() {
            let hom =
                GroupHom::new(levels[i + 1].clone(), levels[i].clone(), map).map_err(|e| {
                    Error::InvalidTower(format!(
                        "{name}: map from level {} to level {i}: {e}",
                        i + 1
                    ))
                })?;
            if !hom.is_surjective() {
                return Err(Error::InvalidTower(format!(
                    "{name}: map from level {} to level {i} is not surjective",
                    i + 1
                )));
            }
            homs.push(hom);
        }
        Ok(Tower {
            name,
            levels,
            maps: homs,
        })
    }

    /// `Z/p ← Z/p² ← … ← Z/p^levels`, each map reduction mod the lower order.
    pub fn cyclic_p_adic(p: usize, levels: usize) -> Tower {
        let groups: Vec<FiniteGroup> = (1..=levels as u32)
            .map(|i| FiniteGroup::cyclic(p.pow(i)))
            .collect();
        let maps = (1..groups.len())
            .map(|i| {
                (0..groups[i].order())
                    .map(|x| x % groups[i - 1].order())
                    .collect()
            })
            .collect();
        Tower::new(format!("Z_{p}"), groups, maps).expect("p-adic tower")
    }

    /// Levelwise product with a fixed group, identity on the new factor.
    pub fn times(&self, h: &FiniteGroup) -> Tower {
        let m = h.order();
        let levels = self
            .levels
            .iter()
            .map(|g| FiniteGroup::product(g, h))
            .collect();
        let maps = self
            .maps
            .iter()
            .map(|f| {
                (0..f.domain().order() * m)
                    .map(|a| f.map()[a / m] * m + a % m)
                    .collect()
            })
            .collect();
        Tower::new(format!("{}x{}", self.name, h.name()), levels, maps).expect("product tower")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[FiniteGroup] {
        &self.levels
    }

    pub fn maps(&self) -> &[GroupHom] {
        &self.maps
    }

    /// Index of the last level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn top(&self) -> &FiniteGroup {
        &self.levels[self.depth()]
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Hom counts into one group along a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCount {
    /// Count at the last level.
    pub count: Count,
    /// Count at every level, non-decreasing.
    pub levels: Vec<Count>,
    /// Whether the last two levels gave the same count. False for a
    /// one-level tower, which offers no evidence either way.
    pub stabilized: bool,
}

/// Counts homs `G_i → c` for every level. Precomposition with a surjection
/// is injective on hom-sets, so the counts must not decrease; a decrease is
/// reported as an invariant violation.
pub fn continuous_hom_count(t: &Tower, c: &FiniteGroup) -> Result<TowerCount> {
    let levels: Vec<Count> = t.levels().iter().map(|g| count_group_homs(g, c)).collect();
    if let Some(i) = (1..levels.len()).find(|&i| levels[i] < levels[i - 1]) {
        return Err(Error::InvariantViolated(format!(
            "{t}: hom count into {c} drops from {} at level {} to {} at level {i}",
            levels[i - 1],
            i - 1,
            levels[i]
        )));
    }
    let d = levels.len() - 1;
    Ok(TowerCount {
        count: levels[d].clone(),
        stabilized: d > 0 && levels[d - 1] == levels[d],
        levels,
    })
}

/// Outcome of comparing two towers against a family of finite groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerDistinction {
    pub result: DistinguishResult<FiniteGroup>,
    /// Family indices (among those tested) where either tower's count had not
    /// stabilized; a verdict resting on them is inconclusive about the limits.
    pub unstable: Vec<usize>,
}

/// The first family member with different last-level counts.
pub fn distinguish_towers(
    t1: &Tower,
    t2: &Tower,
    family: &[FiniteGroup],
) -> Result<TowerDistinction> {
    let mut unstable = Vec::new();
    for (i, c) in family.iter().enumerate() {
        let (a, b) = (continuous_hom_count(t1, c)?, continuous_hom_count(t2, c)?);
        if !(a.stabilized && b.stabilized) {
            unstable.push(i);
        }
        if a.count != b.count {
            return Ok(TowerDistinction {
                result: DistinguishResult {
                    witness: Some(Witness {
                        test: c.clone(),
                        counts: (a.count, b.count),
                    }),
                    tested: i + 1,
                },
                unstable,
            });
        }
    }
    Ok(TowerDistinction {
        result: DistinguishResult {
            witness: None,
            tested: family.len(),
        },
        unstable,
    })
}

/// For each `c`, whether some level surjects onto `c`. Composites of
/// surjections are surjections, so this is decided at the last level.
pub fn surjection_profile(t: &Tower, family: &[FiniteGroup]) -> Vec<bool> {
    family
        .iter()
        .map(|c| find_surjection(t.top(), c).is_some())
        .collect()
}

/// Whether the two towers are isomorphic as inverse systems: levelwise
/// isomorphisms commuting with the connecting maps. An isomorphism at the
/// last level determines the lower ones, because connecting maps are onto.
pub fn towers_isomorphic(t1: &Tower, t2: &Tower) -> bool {
    if t1.levels().len() != t2.levels().len() {
        return false;
    }
    if t1
        .levels()
        .iter()
        .zip(t2.levels())
        .any(|(g, h)| g.order() != h.order())
    {
        return false;
    }
    let d = t1.depth();
    let mut found = false;
    isomorphisms(t1.top(), t2.top(), |top| {
        let mut phi = top.to_vec();
        for i in (0..d).rev() {
            let (p, q) = (t1.maps()[i].map(), t2.maps()[i].map());
            let mut lower = vec![usize::MAX; t1.levels()[i].order()];
            for (x, &px) in p.iter().enumerate() {
                let image = q[phi[x]];
                if lower[px] == usize::MAX {
                    lower[px] = image;
                } else if lower[px] != image {
                    return true;
                }
            }
            if image_size(&lower, t2.levels()[i].order()) != lower.len() {
                return true;
            }
            phi = lower;
        }
        found = true;
        false
    });
    found
}
