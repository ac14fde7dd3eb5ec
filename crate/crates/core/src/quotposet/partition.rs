use std::fmt;

use num_bigint::BigUint;

use crate::{Error, Result};

/// A set partition of `0..n` stored as a restricted-growth string: element
/// `x` lies in block `rgs[x]`, blocks are numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rgs: Vec<usize>,
    blocks: usize,
}

impl Partition {
    /// Validates a restricted-growth string.
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Partition> {
        let mut blocks = 0;
        for (x, &b) in rgs.iter().enumerate() {
            if b > blocks {
                return Err(Error::InvalidArgument(format!(
                    "not a restricted-growth string: entry {x} is {b} after {blocks} blocks"
                )));
            }
            if b == blocks {
                blocks += 1;
            }
        }
        Ok(Partition { rgs, blocks })
    }

    /// The kernel of a map: `x` and `y` share a block iff `map[x] == map[y]`.
    pub fn kernel_of(map: &[usize]) -> Partition {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let rgs = map
            .iter()
            .map(|&v| match seen.iter().find(|(w, _)| *w == v) {
                Some(&(_, b)) => b,
                None => {
                    seen.push((v, seen.len()));
                    seen.len() - 1
                }
            })
            .collect();
        Partition {
            rgs,
            blocks: seen.len(),
        }
    }

    /// Singleton blocks.
    pub fn discrete(n: usize) -> Partition {
        Partition {
            rgs: (0..n).collect(),
            blocks: n,
        }
    }

    /// One block (none when `n = 0`).
    pub fn indiscrete(n: usize) -> Partition {
        Partition {
            rgs: vec![0; n],
            blocks: n.min(1),
        }
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.rgs[x]
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &b) in self.rgs.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.rgs.len()
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.blocks];
        for (x, &b) in self.rgs.iter().enumerate() {
            let o = other.rgs[x];
            if image[b] == usize::MAX {
                image[b] = o;
            } else if image[b] != o {
                return false;
            }
        }
        true
    }

    /// For `self` refining `coarser`, the map from blocks of `self` to
    /// blocks of `coarser`.
    pub(crate) fn block_map_to(&self, coarser: &Partition) -> Vec<usize> {
        let mut image = vec![0; self.blocks];
        for (x, &b) in self.rgs.iter().enumerate() {
            image[b] = coarser.rgs[x];
        }
        image
    }
}

impl fmt::Display for Partition {
    /// Blocks separated by `|`, elements by `,`; the empty partition is `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rgs.is_empty() {
            return f.write_str("-");
        }
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// All partitions of `0..n` in lexicographic order of their restricted-growth
/// strings (one block first, singletons last).
pub fn partitions(n: usize) -> Partitions {
    Partitions {
        rgs: vec![0; n],
        maxes: vec![0; n],
        done: false,
    }
}

#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<usize>,
    /// `maxes[i]` = max of `rgs[..i]`, or 0 for `i = 0`.
    maxes: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        let blocks = if n == 0 {
            0
        } else {
            self.maxes[n - 1].max(self.rgs[n - 1]) + 1
        };
        let out = Partition {
            rgs: self.rgs.clone(),
            blocks,
        };
        // Advance: rightmost position that can grow.
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.maxes[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}

/// Bell numbers by the Bell triangle.
pub fn bell_number(n: usize) -> BigUint {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("nonempty").clone());
        for v in &row {
            let s = next.last().expect("nonempty") + v;
            next.push(s);
        }
        row = next;
    }
    row[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let expected = [1u32, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in expected.iter().enumerate() {
            assert_eq!(bell_number(n), BigUint::from(b));
            assert_eq!(partitions(n).count(), b as usize);
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        let all: Vec<_> = partitions(4).collect();
        assert!(all.windows(2).all(|w| w[0].rgs() < w[1].rgs()));
        for p in &all {
            assert_eq!(Partition::from_rgs(p.rgs().to_vec()).unwrap(), *p);
        }
        assert_eq!(all[0], Partition::indiscrete(4));
        assert_eq!(*all.last().unwrap(), Partition::discrete(4));
    }

    #[test]
    fn rgs_validation() {
        assert!(Partition::from_rgs(vec![0, 2]).is_err());
        assert!(Partition::from_rgs(vec![1]).is_err());
        assert_eq!(Partition::from_rgs(vec![]).unwrap().block_count(), 0);
    }

    #[test]
    fn kernel_and_refinement() {
        let k = Partition::kernel_of(&[5, 3, 5, 7]);
        assert_eq!(k.rgs(), &[0, 1, 0, 2]);
        assert!(Partition::discrete(4).refines(&k));
        assert!(k.refines(&Partition::indiscrete(4)));
        assert!(!k.refines(&Partition::discrete(4)));
        assert_eq!(k.to_string(), "0,2|1|3");
        assert_eq!(Partition::discrete(0).to_string(), "-");
    }
}
