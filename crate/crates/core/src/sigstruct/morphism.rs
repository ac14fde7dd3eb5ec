use std::fmt;

use super::{check_same_signature, decode_index, slot_count, tuple_index, Structure};
use crate::homsearch::MorphismClass;
use crate::{Error, Result};

/// The two proper factorisation systems on finite structures.
///
/// * `SeM`: quotients are surjective homomorphisms that reflect every
///   relation (strong epimorphisms); embeddings are injective homomorphisms.
/// * `ESm`: quotients are all surjective homomorphisms; embeddings are
///   injective homomorphisms that reflect every relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FactorisationSystem {
    #[default]
    SeM,
    ESm,
}

impl FactorisationSystem {
    pub const ALL: [FactorisationSystem; 2] = [FactorisationSystem::SeM, FactorisationSystem::ESm];

    /// The class of embeddings (the mono half).
    pub fn embedding_class(self) -> MorphismClass {
        match self {
            FactorisationSystem::SeM => MorphismClass::Mono,
            FactorisationSystem::ESm => MorphismClass::StrongMono,
        }
    }

    /// The class of quotients (the epi half).
    pub fn quotient_class(self) -> MorphismClass {
        match self {
            FactorisationSystem::SeM => MorphismClass::Quotient,
            FactorisationSystem::ESm => MorphismClass::Surjection,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FactorisationSystem::SeM => "se-m",
            FactorisationSystem::ESm => "e-sm",
        }
    }
}

impl fmt::Display for FactorisationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The set of classes a morphism has been verified to belong to.
///
/// `Quotient` is recorded in the strong (`SeM`) sense; the `ESm` quotients
/// are exactly the surjections.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassTags(u8);

impl ClassTags {
    fn bit(class: MorphismClass) -> u8 {
        match class {
            MorphismClass::Hom => 1,
            MorphismClass::Mono => 2,
            MorphismClass::StrongMono => 4,
            MorphismClass::Surjection => 8,
            MorphismClass::Quotient => 16,
        }
    }

    pub fn contains(self, class: MorphismClass) -> bool {
        self.0 & Self::bit(class) != 0
    }

    fn insert(&mut self, class: MorphismClass) {
        self.0 |= Self::bit(class);
    }

    pub fn iter(self) -> impl Iterator<Item = MorphismClass> {
        MorphismClass::ALL
            .into_iter()
            .filter(move |&c| self.contains(c))
    }
}

impl fmt::Debug for ClassTags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub(crate) fn is_hom(map: &[usize], c: &Structure, a: &Structure) -> bool {
    let mut buf = Vec::new();
    for rel in 0..c.signature().len() {
        for t in c.tuples(rel) {
            buf.clear();
            buf.extend(t.iter().map(|&x| map[x]));
            if !a.holds_index(rel, tuple_index(&buf, a.size())) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_injective(map: &[usize], codomain_size: usize) -> bool {
    let mut seen = vec![false; codomain_size];
    map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

pub(crate) fn is_surjective(map: &[usize], codomain_size: usize) -> bool {
    let mut seen = vec![false; codomain_size];
    for &y in map {
        seen[y] = true;
    }
    seen.into_iter().all(|b| b)
}

/// `h(t) ∈ R_a` implies `t ∈ R_c` for every tuple `t` over `c`.
pub(crate) fn reflects(map: &[usize], c: &Structure, a: &Structure) -> bool {
    let mut t = Vec::new();
    let mut img = Vec::new();
    for rel in 0..c.signature().len() {
        let arity = c.signature().arity(rel);
        let slots = slot_count(c.size(), arity).expect("existing structure");
        t.resize(arity, 0);
        for i in 0..slots {
            if c.holds_index(rel, i) {
                continue;
            }
            decode_index(i, c.size(), &mut t);
            img.clear();
            img.extend(t.iter().map(|&x| map[x]));
            if a.holds_index(rel, tuple_index(&img, a.size())) {
                return false;
            }
        }
    }
    true
}

/// Every tuple of `a` is the image of a tuple of `c`.
pub(crate) fn covers_tuples(map: &[usize], c: &Structure, a: &Structure) -> bool {
    let mut img = Vec::new();
    for rel in 0..c.signature().len() {
        let mut hit = vec![0u64; a.relation_bits(rel).len()];
        for t in c.tuples(rel) {
            img.clear();
            img.extend(t.iter().map(|&x| map[x]));
            super::bit_set(&mut hit, tuple_index(&img, a.size()));
        }
        if hit
            .iter()
            .zip(a.relation_bits(rel))
            .any(|(h, r)| h & r != *r)
        {
            return false;
        }
    }
    true
}

fn check_map(map: &[usize], c: &Structure, a: &Structure) -> Result<()> {
    check_same_signature(c, a)?;
    if map.len() != c.size() {
        return Err(Error::InvalidMap(format!(
            "map has {} entries, domain has {} elements",
            map.len(),
            c.size()
        )));
    }
    if let Some(&y) = map.iter().find(|&&y| y >= a.size()) {
        return Err(Error::InvalidMap(format!(
            "image {y} outside codomain of size {}",
            a.size()
        )));
    }
    Ok(())
}

fn compute_tags(map: &[usize], c: &Structure, a: &Structure) -> Option<ClassTags> {
    if !is_hom(map, c, a) {
        return None;
    }
    let mut tags = ClassTags::default();
    tags.insert(MorphismClass::Hom);
    if is_injective(map, a.size()) {
        tags.insert(MorphismClass::Mono);
        if reflects(map, c, a) {
            tags.insert(MorphismClass::StrongMono);
        }
    }
    if is_surjective(map, a.size()) {
        tags.insert(MorphismClass::Surjection);
        if covers_tuples(map, c, a) {
            tags.insert(MorphismClass::Quotient);
        }
    }
    Some(tags)
}

/// Whether `map: c → a` is a homomorphism of the given class.
pub fn validate_morphism(
    map: &[usize],
    c: &Structure,
    a: &Structure,
    class: MorphismClass,
    system: FactorisationSystem,
) -> Result<bool> {
    check_map(map, c, a)?;
    Ok(compute_tags(map, c, a).is_some_and(|tags| match class {
        MorphismClass::Quotient => match system {
            FactorisationSystem::SeM => tags.contains(MorphismClass::Quotient),
            FactorisationSystem::ESm => tags.contains(MorphismClass::Surjection),
        },
        other => tags.contains(other),
    }))
}

/// A verified homomorphism together with every class it belongs to.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    domain: Structure,
    codomain: Structure,
    map: Vec<usize>,
    tags: ClassTags,
}

impl Morphism {
    /// Rejects maps that are not homomorphisms.
    pub fn new(domain: Structure, codomain: Structure, map: Vec<usize>) -> Result<Morphism> {
        check_map(&map, &domain, &codomain)?;
        let tags = compute_tags(&map, &domain, &codomain).ok_or(Error::NotAHomomorphism)?;
        Ok(Morphism {
            domain,
            codomain,
            map,
            tags,
        })
    }

    pub fn identity(a: &Structure) -> Morphism {
        Morphism::new(a.clone(), a.clone(), (0..a.size()).collect()).expect("identity is a hom")
    }

    pub fn domain(&self) -> &Structure {
        &self.domain
    }

    pub fn codomain(&self) -> &Structure {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn tags(&self) -> ClassTags {
        self.tags
    }

    pub fn is(&self, class: MorphismClass) -> bool {
        self.tags.contains(class)
    }

    pub fn is_quotient(&self, system: FactorisationSystem) -> bool {
        match system {
            FactorisationSystem::SeM => self.is(MorphismClass::Quotient),
            FactorisationSystem::ESm => self.is(MorphismClass::Surjection),
        }
    }

    pub fn is_embedding(&self, system: FactorisationSystem) -> bool {
        self.is(system.embedding_class())
    }

    /// Bijective with a homomorphic inverse.
    pub fn is_isomorphism(&self) -> bool {
        self.is(MorphismClass::StrongMono) && self.is(MorphismClass::Surjection)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if self.codomain != other.domain {
            return Err(Error::InvalidMap(
                "composition of non-matching morphisms".into(),
            ));
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Morphism::new(self.domain.clone(), other.codomain.clone(), map)
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("map", &self.map)
            .field("tags", &self.tags)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigstruct::graphs::{complete, digraph, discrete, loop_point};

    const SEM: FactorisationSystem = FactorisationSystem::SeM;

    #[test]
    fn identity_is_a_hom() {
        let k3 = complete(3);
        assert!(validate_morphism(&[0, 1, 2], &k3, &k3, MorphismClass::Hom, SEM).unwrap());
        let id = Morphism::identity(&k3);
        assert!(id.is_isomorphism());
        assert!(MorphismClass::ALL.iter().all(|&c| id.is(c)));
    }

    #[test]
    fn arc_into_loopless_point_is_not_a_hom() {
        let arc = digraph(2, &[(0, 1)]);
        assert!(!validate_morphism(&[0, 0], &arc, &discrete(1), MorphismClass::Hom, SEM).unwrap());
        assert_eq!(
            Morphism::new(arc, discrete(1), vec![0, 0]).unwrap_err(),
            Error::NotAHomomorphism
        );
    }

    #[test]
    fn arc_onto_loop_is_a_strong_quotient() {
        // The single image tuple (0,0) is the image of (0,1).
        let arc = digraph(2, &[(0, 1)]);
        let lp = loop_point();
        for class in [
            MorphismClass::Hom,
            MorphismClass::Surjection,
            MorphismClass::Quotient,
        ] {
            assert!(validate_morphism(&[0, 0], &arc, &lp, class, SEM).unwrap());
        }
        // Two isolated points onto the loop: surjective but the loop has no preimage.
        let two = discrete(2);
        assert!(validate_morphism(&[0, 0], &two, &lp, MorphismClass::Surjection, SEM).unwrap());
        assert!(!validate_morphism(&[0, 0], &two, &lp, MorphismClass::Quotient, SEM).unwrap());
        assert!(validate_morphism(
            &[0, 0],
            &two,
            &lp,
            MorphismClass::Quotient,
            FactorisationSystem::ESm
        )
        .unwrap());
    }

    #[test]
    fn strong_mono_reflects() {
        let two = discrete(2);
        let k2 = complete(2);
        assert!(validate_morphism(&[0, 1], &two, &k2, MorphismClass::Mono, SEM).unwrap());
        assert!(!validate_morphism(&[0, 1], &two, &k2, MorphismClass::StrongMono, SEM).unwrap());
        assert!(
            validate_morphism(&[0, 1], &k2, &complete(3), MorphismClass::StrongMono, SEM).unwrap()
        );
    }

    #[test]
    fn malformed_maps_are_errors() {
        let k2 = complete(2);
        assert!(matches!(
            validate_morphism(&[0], &k2, &k2, MorphismClass::Hom, SEM),
            Err(Error::InvalidMap(_))
        ));
        assert!(matches!(
            validate_morphism(&[0, 2], &k2, &k2, MorphismClass::Hom, SEM),
            Err(Error::InvalidMap(_))
        ));
        let sig = crate::Signature::new([("R", 3)]).unwrap();
        let other = Structure::new(&sig, 2).unwrap();
        assert!(matches!(
            validate_morphism(&[0, 1], &k2, &other, MorphismClass::Hom, SEM),
            Err(Error::SignatureMismatch(_))
        ));
    }
}
