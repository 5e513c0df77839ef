//! Cartan matrices, Weyl groups and the Weyl action on Cartan twists.
//!
//! Conventions: `a[i][j] = ⟨α_j, α̌_i⟩` (Bourbaki). Weights are stored in
//! the fundamental-weight basis, coweights in the fundamental-coweight
//! basis and Cartan twists `Z = Σ ζ_i α̌_i` by their coroot coordinates.
//! Node indices are 0-based in the API and 1-based in reduced-word strings.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polyring::{Field, Scalar, Q};

/// Default bound on the size of enumerated Weyl groups.
pub const DEFAULT_WEYL_CAP: usize = 1024;

/// Root-system data of a finite-type simple Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    series: char,
    rank: usize,
    a: Vec<Vec<i64>>,
}

impl CartanData {
    /// Standard Cartan matrix for a series letter and rank.
    pub fn new(series: char, rank: usize) -> Result<Self> {
        let bad = || Error::InvalidCartan(format!("no simple type {series}{rank}"));
        if rank == 0 {
            return Err(bad());
        }
        let mut a = vec![vec![0i64; rank]; rank];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |a: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..upto.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        };
        match series {
            'A' => chain(&mut a, rank),
            'B' if rank >= 2 => {
                chain(&mut a, rank);
                a[rank - 1][rank - 2] = -2;
            }
            'C' if rank >= 2 => {
                chain(&mut a, rank);
                a[rank - 2][rank - 1] = -2;
            }
            'D' if rank >= 3 => {
                chain(&mut a, rank - 1);
                a[rank - 3][rank - 1] = -1;
                a[rank - 1][rank - 3] = -1;
            }
            'E' if (6..=8).contains(&rank) => {
                // Bourbaki numbering: 1-3-4-5-..., 2 attached to 4.
                let edges: Vec<(usize, usize)> = [(1, 3), (3, 4), (4, 5), (2, 4)]
                    .into_iter()
                    .chain((5..rank).map(|k| (k, k + 1)))
                    .collect();
                for (u, v) in edges {
                    a[u - 1][v - 1] = -1;
                    a[v - 1][u - 1] = -1;
                }
            }
            'F' if rank == 4 => {
                chain(&mut a, 4);
                a[2][1] = -2;
            }
            'G' if rank == 2 => {
                a[0][1] = -3;
                a[1][0] = -1;
            }
            _ => return Err(bad()),
        }
        Ok(CartanData { series, rank, a })
    }

    /// Parse labels such as `"A2"`, `"B3"`, `"G2"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        let mut chars = label.chars();
        let series = chars
            .next()
            .ok_or_else(|| Error::InvalidCartan("empty type label".into()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidCartan(format!("bad type label {label:?}")))?;
        Self::new(series, rank)
    }

    /// Validate an arbitrary matrix as a finite-type Cartan matrix.
    pub fn from_matrix(a: Vec<Vec<i64>>) -> Result<Self> {
        let r = a.len();
        if r == 0 || a.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCartan("matrix must be square and nonempty".into()));
        }
        for i in 0..r {
            if a[i][i] != 2 {
                return Err(Error::InvalidCartan("diagonal entries must be 2".into()));
            }
            for j in 0..r {
                if i != j && (a[i][j] > 0 || ((a[i][j] == 0) != (a[j][i] == 0))) {
                    return Err(Error::InvalidCartan(format!("bad off-diagonal pair ({i},{j})")));
                }
            }
        }
        let d = symmetrizer(&a)
            .ok_or_else(|| Error::InvalidCartan("matrix is not symmetrizable".into()))?;
        // Finite type: the symmetrized form is positive definite.
        let sym = Matrix::from_fn(r, r, |i, j| d[i].mul(&Q::from_i64(a[i][j])));
        for k in 1..=r {
            if sym.leading_block(k).det() <= Q::zero() {
                return Err(Error::InvalidCartan("matrix is not of finite type".into()));
            }
        }
        Ok(CartanData {
            series: '?',
            rank: r,
            a,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn series(&self) -> char {
        self.series
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn is_type_a(&self) -> bool {
        self.series == 'A'
    }

    /// `a_ij = ⟨α_j, α̌_i⟩`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizer(&self) -> Vec<Q> {
        symmetrizer(&self.a).expect("validated at construction")
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        }
    }

    /// `⟨α_i, Z⟩` for `Z = Σ_j ζ_j α̌_j`, i.e. `Σ_j ζ_j ⟨α_i, α̌_j⟩ = Σ_j a_ji ζ_j`.
    pub fn pairing<F: Scalar>(&self, i: usize, z: &CartanTwist<F>) -> Result<F> {
        self.check(i)?;
        if z.zeta.len() != self.rank {
            return Err(Error::InvalidProblem("twist length differs from rank".into()));
        }
        Ok(self.pairing_unchecked(i, &z.zeta))
    }

    fn pairing_unchecked<F: Scalar>(&self, i: usize, zeta: &[F]) -> F {
        (0..self.rank).fold(F::zero(), |acc, j| {
            acc.add(&zeta[j].mul(&F::from_i64(self.a[j][i])))
        })
    }

    /// `⟨α_i, λ̌⟩` for a coweight in fundamental-coweight coordinates.
    pub fn coweight_pairing(&self, i: usize, coweight: &[i64]) -> i64 {
        coweight[i]
    }

    /// Coroot `α̌_i` in fundamental-coweight coordinates (row `i` of `a`).
    pub fn coroot_in_coweights(&self, i: usize) -> Vec<i64> {
        self.a[i].clone()
    }

    /// Plain Weyl action of `s_i` on a coweight (fundamental-coweight basis).
    pub fn reflect_coweight(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let p = v[i];
        (0..self.rank).map(|j| v[j] - p * self.a[i][j]).collect()
    }

    /// Plain Weyl action of `s_i` on a weight (fundamental-weight basis).
    pub fn reflect_weight(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let p = v[i];
        (0..self.rank).map(|j| v[j] - p * self.a[j][i]).collect()
    }

    /// `s_i(Z) = Z − ⟨α_i, Z⟩ α̌_i`.
    pub fn reflect_twist<F: Scalar>(&self, i: usize, z: &CartanTwist<F>) -> CartanTwist<F> {
        let p = self.pairing_unchecked(i, &z.zeta);
        let mut zeta = z.zeta.clone();
        zeta[i] = zeta[i].sub(&p);
        CartanTwist { zeta }
    }

    fn rho(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            word: vec![],
            image: self.rho(),
            perm: self.is_type_a().then(|| (0..=self.rank).collect()),
        }
    }

    pub fn generator(&self, i: usize) -> Result<WeylElement> {
        self.element_from_word(&[i])
    }

    /// Element `s_{w[0]} s_{w[1]} ⋯`; the stored word is reduced.
    pub fn element_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        for &i in word {
            self.check(i)?;
        }
        let image = word
            .iter()
            .rev()
            .fold(self.rho(), |v, &i| self.reflect_weight(i, &v));
        Ok(self.element_from_image(image))
    }

    /// Recover the element from `w(ρ)` by descent; the word produced is
    /// reduced.
    fn element_from_image(&self, image: Vec<i64>) -> WeylElement {
        let mut word = Vec::new();
        let mut v = image.clone();
        while let Some(i) = (0..self.rank).find(|&i| v[i] < 0) {
            word.push(i);
            v = self.reflect_weight(i, &v);
        }
        let perm = self.is_type_a().then(|| word_permutation(self.rank + 1, &word));
        WeylElement { word, image, perm }
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let mut w = a.word.clone();
        w.extend_from_slice(&b.word);
        self.element_from_word(&w).expect("indices already validated")
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let rev: Vec<usize> = w.word.iter().rev().cloned().collect();
        self.element_from_word(&rev).expect("indices already validated")
    }

    /// `ℓ(s_i w) > ℓ(w)`.
    pub fn left_ascent(&self, w: &WeylElement, i: usize) -> bool {
        w.image[i] > 0
    }

    /// `ℓ(w s_i) > ℓ(w)`.
    pub fn right_ascent(&self, w: &WeylElement, i: usize) -> bool {
        let mut word = w.word.clone();
        word.push(i);
        self.element_from_word(&word).map(|e| e.length() > w.length()).unwrap_or(false)
    }

    /// All Weyl group elements, identity first, ordered by length.
    pub fn weyl_enumerate(&self, cap: usize) -> Result<Vec<WeylElement>> {
        match self.weyl_prefix(cap) {
            (all, true) => Ok(all),
            (_, false) => Err(Error::WeylGroupTooLarge { cap }),
        }
    }

    /// The first `cap` elements in length order, and whether that is the
    /// whole group. Every prefix contains the parents `w'` of its elements
    /// `w = s_i w'`.
    pub fn weyl_prefix(&self, cap: usize) -> (Vec<WeylElement>, bool) {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let id = self.identity();
        seen.insert(id.image.clone());
        let mut all = vec![id];
        let mut frontier = 0;
        while frontier < all.len() {
            let w = all[frontier].clone();
            frontier += 1;
            for i in 0..self.rank {
                if !self.left_ascent(&w, i) {
                    continue;
                }
                let image = self.reflect_weight(i, &w.image);
                if seen.contains(&image) {
                    continue;
                }
                if all.len() >= cap {
                    return (all, false);
                }
                seen.insert(image.clone());
                all.push(self.element_from_image(image));
            }
        }
        (all, true)
    }

    pub fn longest_element(&self, cap: usize) -> Result<WeylElement> {
        let all = self.weyl_enumerate(cap)?;
        Ok(all.into_iter().max_by_key(|w| w.length()).expect("nonempty"))
    }

    /// Plain action `w(Z)`, applying the stored word right to left.
    pub fn weyl_act_on_twist<F: Scalar>(&self, w: &WeylElement, z: &CartanTwist<F>) -> CartanTwist<F> {
        self.act_word_on_twist(&w.word, z)
    }

    /// Action of the product `s_{word[0]} s_{word[1]} ⋯` on a twist.
    pub fn act_word_on_twist<F: Scalar>(&self, word: &[usize], z: &CartanTwist<F>) -> CartanTwist<F> {
        word.iter().rev().fold(z.clone(), |acc, &i| self.reflect_twist(i, &acc))
    }

    /// Plain action `w(λ̌)` on a coweight.
    pub fn weyl_act_on_coweight(&self, w: &WeylElement, v: &[i64]) -> Vec<i64> {
        w.word.iter().rev().fold(v.to_vec(), |acc, &i| self.reflect_coweight(i, &acc))
    }
}

impl fmt::Display for CartanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Option<Vec<Q>> {
    let r = a.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().expect("assigned");
            for j in 0..r {
                if j == i || a[i][j] == 0 {
                    continue;
                }
                // d_i a_ij = d_j a_ji
                let dj = di.mul(&Q::from_i64(a[i][j])).div(&Q::from_i64(a[j][i]));
                match &d[j] {
                    Some(existing) if *existing != dj => return None,
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.expect("assigned")).collect();
    d.iter().all(|x| *x > Q::zero()).then_some(d)
}

/// Permutation of `{0..n-1}` for the product `s_{word[0]} ⋯` with `s_i`
/// swapping `i` and `i+1`; `perm[k] = w(k)`.
fn word_permutation(n: usize, word: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    // w = s_{w0} ∘ s_{w1} ∘ ⋯ : apply the rightmost factor first.
    for k in 0..n {
        let mut x = k;
        for &i in word.iter().rev() {
            if x == i {
                x = i + 1;
            } else if x == i + 1 {
                x = i;
            }
        }
        perm[k] = x;
    }
    perm
}

/// A Weyl group element, identified by its action on a regular weight.
#[derive(Clone, Debug)]
pub struct WeylElement {
    word: Vec<usize>,
    image: Vec<i64>,
    perm: Option<Vec<usize>>,
}

impl WeylElement {
    /// A reduced word, 0-based node indices: `w = s_{word[0]} s_{word[1]} ⋯`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// For type A: `perm[k] = w(k)` on `{0..r}`.
    pub fn permutation(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    /// 1-based reduced word string: `""`, `"1"`, `"121"`; comma-separated
    /// when some index exceeds 9.
    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }
}

/// Format a 0-based word as a 1-based string.
pub fn word_string(word: &[usize]) -> String {
    if word.iter().all(|&i| i < 9) {
        word.iter().map(|i| char::from(b'1' + *i as u8)).collect()
    } else {
        word.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Parse a 1-based word string produced by [`word_string`].
pub fn parse_word_string(s: &str) -> Option<Vec<usize>> {
    if s.is_empty() {
        return Some(vec![]);
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().ok().and_then(|v| v.checked_sub(1)))
            .collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).and_then(|d| (d as usize).checked_sub(1)))
            .collect()
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.image.hash(state);
    }
}

/// Constant Cartan element `Z = Σ ζ_i α̌_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanTwist<F> {
    pub zeta: Vec<F>,
}

impl<F: Scalar> CartanTwist<F> {
    pub fn new(zeta: Vec<F>) -> Self {
        CartanTwist { zeta }
    }

    pub fn zero(rank: usize) -> Self {
        CartanTwist {
            zeta: vec![F::zero(); rank],
        }
    }

    pub fn to_float(&self) -> CartanTwist<crate::polyring::C> {
        CartanTwist {
            zeta: self.zeta.iter().map(|z| z.to_c64()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CartanTwist {
            zeta: self.zeta.iter().zip(&other.zeta).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        CartanTwist {
            zeta: self.zeta.iter().map(|a| a.mul(s)).collect(),
        }
    }

    /// Regular: `⟨α_i, Z⟩ ≠ 0` for every simple root.
    pub fn is_regular(&self, cd: &CartanData) -> bool {
        (0..cd.rank()).all(|i| !cd.pairing_unchecked(i, &self.zeta).is_zero())
    }
}
