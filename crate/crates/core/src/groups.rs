//! Free-group words, permutation representations and the canonical trace.
//!
//! Permutations are stored as index maps and composed exactly; a matrix is
//! only materialized when one is demanded, so the homomorphism property
//! holds with integer arithmetic.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{Complex64, ComplexMatrix, UnitaryMatrix};

/// A word over free generators: letters (generator index, exponent ±1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i8)>) -> Result<Self> {
        if letters.iter().any(|&(_, e)| e != 1 && e != -1) {
            return Err(Error::InvalidInput("word exponents must be ±1".into()));
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    /// Single generator g_i.
    pub fn generator(index: usize) -> Self {
        Self { letters: vec![(index, 1)] }
    }

    /// Build from (index, exponent) pairs with arbitrary integer exponents.
    pub fn from_powers(powers: &[(usize, i32)]) -> Self {
        let mut letters = Vec::new();
        for &(g, e) in powers {
            let sign: i8 = if e >= 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                letters.push((g, sign));
            }
        }
        Self { letters }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index + 1, or 0 for the empty word.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|&(g, _)| g + 1).max().unwrap_or(0)
    }

    /// Concatenation self · other.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect();
        Word { letters }
    }

    /// Render as "g0 g1^-1 ..." ("e" for the empty word).
    pub fn label(&self) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^-1") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Free reduction: cancel adjacent inverse pairs until none remain.
/// Idempotent.
pub fn reduce(w: &Word) -> Word {
    let mut stack: Vec<(usize, i8)> = Vec::with_capacity(w.letters.len());
    for &(g, e) in &w.letters {
        match stack.last() {
            Some(&(tg, te)) if tg == g && te == -e => {
                stack.pop();
            }
            _ => stack.push((g, e)),
        }
    }
    Word { letters: stack }
}

/// Canonical trace on the free group: 1 if the word freely reduces to the
/// empty word, else 0.
pub fn canonical_trace(w: &Word) -> u8 {
    u8::from(reduce(w).is_empty())
}

/// All nonempty reduced words of length 1..=max_len over `arity` free
/// generators, in length-lexicographic order.
pub fn reduced_words(arity: usize, max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut frontier: Vec<Word> = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..arity {
                for e in [1i8, -1] {
                    if let Some(&(tg, te)) = w.letters.last() {
                        if tg == g && te == -e {
                            continue;
                        }
                    }
                    let mut letters = w.letters.clone();
                    letters.push((g, e));
                    next.push(Word { letters });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// One permutation of {0..n-1} per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    n: usize,
    /// perms[g][i] = image of point i under generator g.
    perms: Vec<Vec<usize>>,
}

impl PermRep {
    pub fn new(n: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        if perms.is_empty() {
            return Err(Error::InvalidInput("representation needs a generator".into()));
        }
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {g} permutes {} points, expected {n}",
                    p.len()
                )));
            }
            let mut seen = vec![false; n];
            for &img in p {
                if img >= n || seen[img] {
                    return Err(Error::InvalidInput(format!(
                        "generator {g} is not a bijection on 0..{n}"
                    )));
                }
                seen[img] = true;
            }
        }
        Ok(Self { n, perms })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Image of a word as a permutation, composed exactly.
    /// Letters act left to right: (w₁·w₂)(i) = w₁(w₂(i)).
    pub fn word_perm(&self, w: &Word) -> Result<Vec<usize>> {
        if w.arity() > self.arity() {
            return Err(Error::InvalidInput(format!(
                "word uses generator {} but the representation has arity {}",
                w.arity() - 1,
                self.arity()
            )));
        }
        let mut out: Vec<usize> = (0..self.n).collect();
        for &(g, e) in &w.letters {
            let p = &self.perms[g];
            out = if e == 1 {
                out.iter().map(|&i| p[i]).collect()
            } else {
                let inv = invert(p);
                out.iter().map(|&i| inv[i]).collect()
            };
        }
        Ok(out)
    }

    /// Number of fixed points of the image of a word.
    pub fn fixed_points(&self, w: &Word) -> Result<usize> {
        Ok(self.word_perm(w)?.iter().enumerate().filter(|&(i, &img)| i == img).count())
    }

    /// Permutation matrix of one generator: U e_i = e_{σ(i)}.
    pub fn generator_matrix(&self, g: usize) -> UnitaryMatrix {
        perm_matrix(&self.perms[g])
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &img) in p.iter().enumerate() {
        inv[img] = i;
    }
    inv
}

fn perm_matrix(p: &[usize]) -> UnitaryMatrix {
    let n = p.len();
    let mut m = ComplexMatrix::zeros(n);
    for (i, &img) in p.iter().enumerate() {
        m.set(img, i, Complex64::new(1.0, 0.0));
    }
    UnitaryMatrix::new_unchecked(m)
}

/// Evaluate a word to its permutation matrix. The normalized trace of the
/// result is the fixed-point fraction of the image permutation.
pub fn eval_word(rep: &PermRep, w: &Word) -> Result<UnitaryMatrix> {
    Ok(perm_matrix(&rep.word_perm(w)?))
}

/// Uniform (Fisher–Yates) permutations, one per generator, deterministic
/// per seed.
pub fn random_perm_rep(arity: usize, n: usize, seed: u64) -> Result<PermRep> {
    if arity == 0 {
        return Err(Error::InvalidInput("arity must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = (0..arity)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    PermRep::new(n, perms)
}

/// Left-regular representation from a Cayley table t[g][h] = g·h: element g
/// acts by h ↦ g·h, so non-identity elements act fixed-point-free.
pub fn regular_rep(cayley_table: &[Vec<usize>]) -> Result<PermRep> {
    let n = cayley_table.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty Cayley table".into()));
    }
    if cayley_table.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("Cayley table is not square".into()));
    }
    PermRep::new(n, cayley_table.to_vec())
}

// JSON: {"n": n, "perms": [[images…]…]} one-indexed.
#[derive(Serialize, Deserialize)]
struct PermRepJson {
    n: usize,
    perms: Vec<Vec<usize>>,
}

impl Serialize for PermRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let perms = self
            .perms
            .iter()
            .map(|p| p.iter().map(|&i| i + 1).collect())
            .collect();
        PermRepJson { n: self.n, perms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PermRepJson::deserialize(d)?;
        let perms = raw
            .perms
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&i| {
                        i.checked_sub(1).ok_or_else(|| {
                            serde::de::Error::custom("permutation images are one-indexed")
                        })
                    })
                    .collect::<std::result::Result<Vec<usize>, D::Error>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        PermRep::new(raw.n, perms).map_err(serde::de::Error::custom)
    }
}
