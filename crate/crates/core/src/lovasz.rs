//! Hom profiles and isomorphism by counting.
//!
//! Two finite structures are isomorphic iff they admit the same number of
//! homomorphisms from every finite structure (right side), or equivalently
//! into every finite structure (left side). At desk scale the test family
//! is all isomorphism types up to a size budget, enumerated by
//! (size, canonical code), and the first test with differing counts is
//! reported.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use crate::homsearch::{HomSearch, MorphismClass};
use crate::quotposet::QuotientPoset;
use crate::sigstruct::{
    canonical_representatives, check_same_signature, representatives_of_size, CanonicalCode,
    FactorisationSystem, Signature, Structure, StructureClass,
};
use crate::{Count, Error, Limits, Result};

/// Which way the test structures point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    /// Count `test → subject`.
    #[default]
    Right,
    /// Count `subject → test`.
    Left,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "right" => Ok(Side::Right),
            "left" => Ok(Side::Left),
            _ => Err(Error::InvalidArgument(format!("unknown side `{s}`"))),
        }
    }
}

/// Counts of one class of morphisms between a subject and a test family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomProfile {
    pub subject: Structure,
    pub family: Vec<Structure>,
    pub counts: Vec<Count>,
    pub side: Side,
    pub class: MorphismClass,
    pub system: FactorisationSystem,
}

fn count_side(
    test: &Structure,
    subject: &Structure,
    side: Side,
    class: MorphismClass,
    system: FactorisationSystem,
) -> Result<Count> {
    match side {
        Side::Right => HomSearch::new(test, class, system).count(subject),
        Side::Left => HomSearch::new(subject, class, system).count(test),
    }
}

pub fn hom_profile(
    a: &Structure,
    family: &[Structure],
    side: Side,
    class: MorphismClass,
    system: FactorisationSystem,
) -> Result<HomProfile> {
    let counts = family
        .iter()
        .map(|t| {
            check_same_signature(t, a)?;
            count_side(t, a, side, class, system)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomProfile {
        subject: a.clone(),
        family: family.to_vec(),
        counts,
        side,
        class,
        system,
    })
}

/// `Σ_{x ∈ Q(c)} |hom(cod x, a)|·μ(x, top)`: the number of embeddings
/// `c ↣ a`, obtained by Möbius inversion of hom counts over the quotient
/// poset.
pub fn embeddings_via_mobius(
    c: &Structure,
    a: &Structure,
    system: FactorisationSystem,
) -> Result<Count> {
    embeddings_via_mobius_with(c, a, system, &Limits::default())
}

pub fn embeddings_via_mobius_with(
    c: &Structure,
    a: &Structure,
    system: FactorisationSystem,
    limits: &Limits,
) -> Result<Count> {
    check_same_signature(c, a)?;
    let q = QuotientPoset::new(c, system, limits)?;
    let mut total = BigInt::zero();
    for class in q.codomain_classes()? {
        if class.mobius != 0 {
            let homs = HomSearch::new(&class.codomain, MorphismClass::Hom, system).count(a)?;
            total += BigInt::from(class.mobius) * BigInt::from(homs);
        }
    }
    match total.sign() {
        Sign::Minus => Err(Error::InvariantViolated(format!(
            "Möbius inversion produced a negative count {total}"
        ))),
        _ => Ok(total.magnitude().clone()),
    }
}

/// Outcome of a distinguishing run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Distinguished,
    ProfilesEqualWithinBudget,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Distinguished => "distinguished",
            Verdict::ProfilesEqualWithinBudget => "profiles-equal-within-budget",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A test object with different counts for the two subjects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<W> {
    pub test: W,
    pub counts: (Count, Count),
}

/// Result of comparing two subjects against an ordered test family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishResult<W = Structure> {
    /// The first test with differing counts; the counts always differ.
    pub witness: Option<Witness<W>>,
    /// Number of tests evaluated.
    pub tested: usize,
}

impl<W> DistinguishResult<W> {
    pub fn verdict(&self) -> Verdict {
        if self.witness.is_some() {
            Verdict::Distinguished
        } else {
            Verdict::ProfilesEqualWithinBudget
        }
    }

    pub fn is_distinguished(&self) -> bool {
        self.witness.is_some()
    }
}

/// Options for [`distinguish`].
#[derive(Debug, Clone)]
pub struct DistinguishOptions {
    /// Largest test structure size.
    pub budget: usize,
    pub side: Side,
    pub class: MorphismClass,
    pub system: FactorisationSystem,
    /// Which structures make up the test family.
    pub family: StructureClass,
    pub limits: Limits,
}

impl DistinguishOptions {
    pub fn new(budget: usize) -> DistinguishOptions {
        DistinguishOptions {
            budget,
            side: Side::Right,
            class: MorphismClass::Hom,
            system: FactorisationSystem::SeM,
            family: StructureClass::All,
            limits: Limits::default(),
        }
    }

    pub fn side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn class(mut self, class: MorphismClass) -> Self {
        self.class = class;
        self
    }

    pub fn system(mut self, system: FactorisationSystem) -> Self {
        self.system = system;
        self
    }

    pub fn family(mut self, family: StructureClass) -> Self {
        self.family = family;
        self
    }

    pub fn limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}

/// Canonical representatives of all isomorphism types up to a size budget,
/// in (size, canonical code) order, with compiled search plans.
#[derive(Debug, Clone)]
pub struct TestFamily {
    signature: Arc<Signature>,
    budget: usize,
    members: Vec<(CanonicalCode, Structure)>,
    class: MorphismClass,
    system: FactorisationSystem,
    /// Plans with each member as domain, for right-side counting.
    plans: Vec<HomSearch>,
}

impl TestFamily {
    pub fn new(
        signature: &Arc<Signature>,
        budget: usize,
        family: StructureClass,
        class: MorphismClass,
        system: FactorisationSystem,
        limits: &Limits,
    ) -> Result<TestFamily> {
        if budget < 1 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        let members = canonical_representatives(signature, budget, family, limits)?;
        let plans = members
            .iter()
            .map(|(_, s)| HomSearch::new(s, class, system))
            .collect();
        Ok(TestFamily {
            signature: Arc::clone(signature),
            budget,
            members,
            class,
            system,
            plans,
        })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(CanonicalCode, Structure)] {
        &self.members
    }

    /// Count against member `i` on the given side.
    pub fn count(&self, i: usize, subject: &Structure, side: Side) -> Result<Count> {
        match side {
            Side::Right => self.plans[i].count(subject),
            Side::Left => {
                HomSearch::new(subject, self.class, self.system).count(&self.members[i].1)
            }
        }
    }

    /// The profile of `subject` over the whole family.
    pub fn profile(&self, subject: &Structure, side: Side) -> Result<HomProfile> {
        self.check(subject)?;
        let left = HomSearch::new(subject, self.class, self.system);
        let counts = (0..self.len())
            .map(|i| match side {
                Side::Right => self.plans[i].count(subject),
                Side::Left => left.count(&self.members[i].1),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HomProfile {
            subject: subject.clone(),
            family: self.members.iter().map(|(_, s)| s.clone()).collect(),
            counts,
            side,
            class: self.class,
            system: self.system,
        })
    }

    fn check(&self, subject: &Structure) -> Result<()> {
        if *subject.signature() != self.signature {
            return Err(Error::SignatureMismatch(format!(
                "{} vs test family over {}",
                subject.signature(),
                self.signature
            )));
        }
        Ok(())
    }

    /// The first member, in family order, with differing counts.
    pub fn distinguish(
        &self,
        a: &Structure,
        b: &Structure,
        side: Side,
    ) -> Result<DistinguishResult> {
        self.check(a)?;
        self.check(b)?;
        let (left_a, left_b) = match side {
            Side::Left => (
                Some(HomSearch::new(a, self.class, self.system)),
                Some(HomSearch::new(b, self.class, self.system)),
            ),
            Side::Right => (None, None),
        };
        for i in 0..self.len() {
            let test = &self.members[i].1;
            let (ca, cb) = match (&left_a, &left_b) {
                (Some(pa), Some(pb)) => (pa.count(test)?, pb.count(test)?),
                _ => (self.plans[i].count(a)?, self.plans[i].count(b)?),
            };
            if ca != cb {
                return Ok(DistinguishResult {
                    witness: Some(Witness {
                        test: test.clone(),
                        counts: (ca, cb),
                    }),
                    tested: i + 1,
                });
            }
        }
        Ok(DistinguishResult {
            witness: None,
            tested: self.len(),
        })
    }
}

/// Searches all structures up to the budget, in (size, canonical code)
/// order, for one with differing counts.
///
/// Sizes are enumerated one at a time, so a witness is returned without
/// generating the larger sizes.
pub fn distinguish(
    a: &Structure,
    b: &Structure,
    options: &DistinguishOptions,
) -> Result<DistinguishResult> {
    check_same_signature(a, b)?;
    if options.budget < 1 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let (class, system) = (options.class, options.system);
    let (left_a, left_b) = match options.side {
        Side::Left => (
            Some(HomSearch::new(a, class, system)),
            Some(HomSearch::new(b, class, system)),
        ),
        Side::Right => (None, None),
    };
    let mut tested = 0;
    for n in 0..=options.budget {
        let reps =
            representatives_of_size(a.signature(), n, options.family, &options.limits, tested)?;
        for (_, test) in reps {
            tested += 1;
            let (ca, cb) = match (&left_a, &left_b) {
                (Some(pa), Some(pb)) => (pa.count(&test)?, pb.count(&test)?),
                _ => {
                    let plan = HomSearch::new(&test, class, system);
                    (plan.count(a)?, plan.count(b)?)
                }
            };
            if ca != cb {
                return Ok(DistinguishResult {
                    witness: Some(Witness {
                        test,
                        counts: (ca, cb),
                    }),
                    tested,
                });
            }
        }
    }
    Ok(DistinguishResult {
        witness: None,
        tested,
    })
}

/// Isomorphism by hom counting with budget `max(|a|, |b|)`.
///
/// Hom counts from all structures up to the larger size determine the
/// embedding counts of those structures (Möbius inversion over their
/// quotients), and mutual embeddings between finite structures are
/// isomorphisms.
pub fn decide_isomorphic_by_counting(
    a: &Structure,
    b: &Structure,
    system: FactorisationSystem,
) -> Result<bool> {
    let options = DistinguishOptions::new(a.size().max(b.size()).max(1)).system(system);
    Ok(!distinguish(a, b, &options)?.is_distinguished())
}

/// Profiles of many subjects against one family, keyed for equality tests.
pub fn profile_classes(
    family: &TestFamily,
    subjects: &[Structure],
    side: Side,
) -> Result<HashMap<Vec<Count>, Vec<usize>>> {
    let mut classes: HashMap<Vec<Count>, Vec<usize>> = HashMap::new();
    for (i, s) in subjects.iter().enumerate() {
        classes
            .entry(family.profile(s, side)?.counts)
            .or_default()
            .push(i);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigstruct::graphs::{complete, cycle, digraph, discrete, undirected};
    use crate::sigstruct::{are_isomorphic, disjoint_union, relabel};

    const SEM: FactorisationSystem = FactorisationSystem::SeM;

    fn big(n: u64) -> Count {
        Count::from(n)
    }

    fn small(max: usize) -> Vec<Structure> {
        canonical_representatives(
            &Signature::binary(),
            max,
            StructureClass::All,
            &Limits::default(),
        )
        .unwrap()
        .into_iter()
        .map(|(_, s)| s)
        .collect()
    }

    #[test]
    fn profile_examples() {
        let k2 = undirected(2, &[(0, 1)]);
        let family = [discrete(1), digraph(2, &[(0, 1)])];
        let p = hom_profile(&k2, &family, Side::Right, MorphismClass::Hom, SEM).unwrap();
        assert_eq!(p.counts, vec![big(2), big(2)]);
        let empty = hom_profile(&k2, &[], Side::Right, MorphismClass::Hom, SEM).unwrap();
        assert!(empty.counts.is_empty());
        for a in small(2) {
            let p = hom_profile(
                &a,
                std::slice::from_ref(&a),
                Side::Left,
                MorphismClass::Hom,
                SEM,
            )
            .unwrap();
            assert!(p.counts[0] >= big(1));
        }
    }

    #[test]
    fn mobius_embedding_examples() {
        let sig = Signature::empty();
        let two = Structure::new(&sig, 2).unwrap();
        for n in 0..6u64 {
            let a = Structure::new(&sig, n as usize).unwrap();
            assert_eq!(
                embeddings_via_mobius(&two, &a, SEM).unwrap(),
                big(n * n - n)
            );
        }
        let k3 = complete(3);
        assert_eq!(embeddings_via_mobius(&k3, &k3, SEM).unwrap(), big(6));
        let point = discrete(1);
        assert_eq!(
            embeddings_via_mobius(&point, &cycle(5), SEM).unwrap(),
            big(5)
        );
    }

    #[test]
    fn mobius_embeddings_match_direct_counts_up_to_three() {
        let family = small(3);
        for system in FactorisationSystem::ALL {
            for c in &family {
                let q = QuotientPoset::new(c, system, &Limits::default()).unwrap();
                let classes = q.codomain_classes().unwrap();
                let plans: Vec<_> = classes
                    .iter()
                    .filter(|cl| cl.mobius != 0)
                    .map(|cl| {
                        (
                            cl.mobius,
                            HomSearch::new(&cl.codomain, MorphismClass::Hom, system),
                        )
                    })
                    .collect();
                let direct = HomSearch::new(c, system.embedding_class(), system);
                for a in &family {
                    let via: i64 = plans
                        .iter()
                        .map(|(m, p)| m * p.count_u64(a).unwrap() as i64)
                        .sum();
                    assert_eq!(
                        via,
                        direct.count_u64(a).unwrap() as i64,
                        "{c:?} {a:?} {system}"
                    );
                }
            }
        }
        let c = digraph(3, &[(0, 1), (1, 2)]);
        let a = digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 1)]);
        for system in FactorisationSystem::ALL {
            let direct = HomSearch::new(&c, system.embedding_class(), system)
                .count(&a)
                .unwrap();
            assert_eq!(embeddings_via_mobius(&c, &a, system).unwrap(), direct);
        }
    }

    #[test]
    fn hexagon_vs_two_triangles() {
        let c6 = cycle(6);
        let two = disjoint_union(&cycle(3), &cycle(3)).unwrap();
        let r = distinguish(&c6, &two, &DistinguishOptions::new(3)).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.test, complete(3));
        assert_eq!(w.counts, (big(0), big(12)));
        assert!(!decide_isomorphic_by_counting(&c6, &two, SEM).unwrap());
    }

    #[test]
    fn identical_and_relabeled_subjects() {
        let a = digraph(4, &[(0, 1), (1, 2), (2, 0), (3, 3), (3, 0)]);
        let r = distinguish(&a, &a, &DistinguishOptions::new(3)).unwrap();
        assert_eq!(r.verdict(), Verdict::ProfilesEqualWithinBudget);
        let b = relabel(&a, &[3, 1, 0, 2]).unwrap();
        assert!(decide_isomorphic_by_counting(&a, &b, SEM).unwrap());
    }

    #[test]
    fn edge_vs_two_points_on_the_left() {
        let k2 = undirected(2, &[(0, 1)]);
        let two = discrete(2);
        let r = distinguish(&k2, &two, &DistinguishOptions::new(1).side(Side::Left)).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.test, discrete(1));
        assert_eq!(w.counts, (big(0), big(1)));
    }

    #[test]
    fn budget_and_cap_errors() {
        let a = discrete(1);
        assert!(distinguish(&a, &a, &DistinguishOptions::new(0)).is_err());
        let tight = Limits::default().with_structure_count(10);
        assert!(distinguish(
            &a,
            &discrete(2),
            &DistinguishOptions::new(3).limits(tight.clone())
        )
        .is_ok());
        match distinguish(&a, &a, &DistinguishOptions::new(3).limits(tight)) {
            Err(Error::LimitExceeded { limit, reached, .. }) => {
                assert_eq!(limit, 10);
                assert_eq!(reached, 11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn counting_decides_isomorphism_up_to_three() {
        let family = small(3);
        // Include non-canonical labelings so equal types appear as distinct
        // labeled inputs.
        let mut subjects = family.clone();
        for s in family.iter().filter(|s| s.size() == 3) {
            subjects.push(relabel(s, &[1, 2, 0]).unwrap());
        }
        let tests = TestFamily::new(
            &Signature::binary(),
            3,
            StructureClass::All,
            MorphismClass::Hom,
            SEM,
            &Limits::default(),
        )
        .unwrap();
        for side in [Side::Right, Side::Left] {
            let profiles: Vec<_> = subjects
                .iter()
                .map(|s| tests.profile(s, side).unwrap().counts)
                .collect();
            for i in 0..subjects.len() {
                for j in 0..subjects.len() {
                    let iso = are_isomorphic(&subjects[i], &subjects[j]).unwrap();
                    assert_eq!(profiles[i] == profiles[j], iso);
                }
            }
        }
        for (i, a) in subjects.iter().enumerate().step_by(5) {
            for b in subjects.iter().skip(i % 3).step_by(4) {
                let iso = are_isomorphic(a, b).unwrap();
                assert_eq!(decide_isomorphic_by_counting(a, b, SEM).unwrap(), iso);
                let r = tests.distinguish(a, b, Side::Right).unwrap();
                if let Some(w) = &r.witness {
                    assert_ne!(w.counts.0, w.counts.1);
                }
            }
        }
    }

    #[test]
    fn side_names() {
        assert_eq!("left".parse::<Side>().unwrap(), Side::Left);
        assert_eq!(Side::default(), Side::Right);
        assert!("up".parse::<Side>().is_err());
        assert_eq!(Verdict::Distinguished.to_string(), "distinguished");
    }
}
