//! Slope parameters of the K-theoretic flavor.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominator of the default slopes.
pub const SLOPE_DENOMINATOR: i64 = 997;

/// Largest coefficient in the genericity test.
pub const GENERICITY_GUARD: i64 = 8;

/// How the exponent `m_{ik} + 1/2` of a K-theoretic one-tie function is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SlopeMode {
    /// `⌊m_{ik}⌋ + 1/2`: the integral part, which is what the elliptic
    /// limit produces and what makes the K-theoretic classes Laurent
    /// polynomials in half-integer powers.
    #[default]
    Floor,
    /// `m_{ik} + 1/2` with the exact rational `m_{ik}`.
    Literal,
}

impl std::str::FromStr for SlopeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<SlopeMode> {
        match s.trim().to_ascii_lowercase().as_str() {
            "floor" => Ok(SlopeMode::Floor),
            "literal" => Ok(SlopeMode::Literal),
            other => Err(Error::Parse(format!("unknown slope mode `{other}` (expected floor or literal)"))),
        }
    }
}

/// Generic slopes `s_1, …, s_{m-1}` together with the exponent mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeConfig {
    /// The slopes.
    pub s: Vec<Rational64>,
    /// Exponent mode.
    #[serde(default)]
    pub mode: SlopeMode,
}

impl SlopeConfig {
    /// Slopes as given; rejects non-generic vectors.
    pub fn new(s: Vec<Rational64>) -> Result<SlopeConfig> {
        if !is_generic(&s) {
            return Err(Error::Input(format!("slopes {s:?} are not generic")));
        }
        Ok(SlopeConfig { s, mode: SlopeMode::Floor })
    }

    /// Parses `"p/q,p/q,…"` (integers allowed).
    pub fn parse(text: &str) -> Result<SlopeConfig> {
        let mut s = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v = match part.split_once('/') {
                Some((p, q)) => {
                    let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad slope `{part}`")))?;
                    let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad slope `{part}`")))?;
                    if q == 0 {
                        return Err(Error::Parse(format!("zero denominator in `{part}`")));
                    }
                    Rational64::new(p, q)
                }
                None => Rational64::from_integer(part.parse().map_err(|_| Error::Parse(format!("bad slope `{part}`")))?),
            };
            s.push(v);
        }
        SlopeConfig::new(s)
    }

    /// The default slopes for `m` NS5 branes: `p_i / 997` with distinct
    /// `p_i ∈ [100, 900)`, redrawn until generic.
    pub fn random<R: Rng>(m: usize, rng: &mut R) -> SlopeConfig {
        let len = m.saturating_sub(1);
        loop {
            let s: Vec<Rational64> = sample(rng, 800, len)
                .into_iter()
                .map(|p| Rational64::new(p as i64 + 100, SLOPE_DENOMINATOR))
                .collect();
            if is_generic(&s) {
                return SlopeConfig { s, mode: SlopeMode::Floor };
            }
        }
    }

    /// `random(m, ·)` driven by a ChaCha8 generator seeded with `seed`.
    pub fn from_seed(m: usize, seed: u64) -> SlopeConfig {
        SlopeConfig::random(m, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Returns a copy using the given exponent mode.
    pub fn with_mode(mut self, mode: SlopeMode) -> SlopeConfig {
        self.mode = mode;
        self
    }

    /// `m_{ik} = s_i + … + s_{k-1}` (1-based, `i < k`).
    pub fn m(&self, i: usize, k: usize) -> Result<Rational64> {
        if i == 0 || k > self.s.len() + 1 || i > k {
            return Err(Error::Input(format!("m_{{{i}{k}}} needs slopes s_{i}..s_{}; have {}", k.saturating_sub(1), self.s.len())));
        }
        Ok(self.s[i - 1..k - 1].iter().copied().fold(Rational64::zero(), |a, b| a + b))
    }

    /// The exponent of the one-tie K prefactor: `m_{ik} + 1/2` read per mode.
    pub fn exponent(&self, i: usize, k: usize) -> Result<Rational64> {
        let m = self.m(i, k)?;
        let base = match self.mode {
            SlopeMode::Floor => m.floor(),
            SlopeMode::Literal => m,
        };
        Ok(base + Rational64::new(1, 2))
    }

    /// Number of slopes.
    pub fn len(&self) -> usize {
        self.s.len()
    }

    /// Whether no slopes are stored.
    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Slopes as floats.
    pub fn as_f64(&self) -> Vec<f64> {
        self.s.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Genericity: no contiguous sum `m_{ik}` is an integer, and no
/// combination `n_i s_i + n_j s_j` with `|n_i|, |n_j| ≤ 8` (not both zero)
/// is an integer.
///
/// Combinations of three or more slopes are not tested: with denominator
/// 997 almost every vector of three or more slopes has such a resonance.
pub fn is_generic(s: &[Rational64]) -> bool {
    let integral = |x: Rational64| x.is_integer();
    for i in 0..s.len() {
        let mut acc = Rational64::zero();
        for x in &s[i..] {
            acc += x;
            if integral(acc) {
                return false;
            }
        }
    }
    let g = GENERICITY_GUARD;
    for i in 0..s.len() {
        for j in i..s.len() {
            for a in -g..=g {
                for b in -g..=g {
                    if i == j && b != 0 {
                        continue;
                    }
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let x = s[i] * a + s[j] * b;
                    if integral(x) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
