//! Brane diagrams and their charge / dimension bookkeeping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A separated type-A brane diagram, named by its fivebrane charges.
///
/// NS5 branes `Z_1..Z_m` are indexed right-to-left, D5 branes `A_1..A_n`
/// left-to-right. D3 brane `X_k` sits between consecutive fivebranes, with
/// `X_0` between the rightmost NS5 and the leftmost D5; `Z_i` is between
/// `X_{-i}` and `X_{-i+1}`, and `A_k` between `X_{k-1}` and `X_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraneDiagram {
    r: Vec<usize>,
    c: Vec<usize>,
}

impl BraneDiagram {
    /// Diagram with NS5 charges `r` and D5 charges `c`; all charges must be
    /// positive and `Σr = Σc`.
    pub fn new(r: Vec<usize>, c: Vec<usize>) -> Result<BraneDiagram> {
        if r.iter().chain(c.iter()).any(|&x| x == 0) {
            return Err(Error::Input(format!(
                "fivebrane charges must be positive (r={r:?}, c={c:?}); drop zero-charge branes or use `with_zero_charges`"
            )));
        }
        BraneDiagram::with_zero_charges(r, c)
    }

    /// Like [`BraneDiagram::new`] but admits NS5 or D5 branes of charge 0.
    ///
    /// Such diagrams describe the same variety as the one with the empty
    /// branes removed, but their formulas carry the extra branes' `z`
    /// variables and ℏ-shifts, which some worked examples rely on.
    pub fn with_zero_charges(r: Vec<usize>, c: Vec<usize>) -> Result<BraneDiagram> {
        if r.is_empty() || c.is_empty() {
            return Err(Error::Input("a diagram needs at least one NS5 and one D5 brane".into()));
        }
        let (sr, sc): (usize, usize) = (r.iter().sum(), c.iter().sum());
        if sr != sc {
            return Err(Error::Input(format!("charge sums differ: Σr = {sr}, Σc = {sc}")));
        }
        Ok(BraneDiagram { r, c })
    }

    /// Parses either the slash notation `"/1/3/4/5\3\1\"` (D3 multiplicities
    /// between fivebranes; `/` is NS5, `\` is D5) or the charge form
    /// `"r=1,1,2,1;c=2,2,1"`.
    pub fn parse(text: &str) -> Result<BraneDiagram> {
        let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        if s.starts_with("r=") || s.starts_with("c=") {
            return parse_charge_form(&s);
        }
        parse_slash_form(&s)
    }

    /// NS5 charges `r_1..r_m`.
    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// D5 charges `c_1..c_n`.
    pub fn c(&self) -> &[usize] {
        &self.c
    }

    /// Number of NS5 branes.
    pub fn m(&self) -> usize {
        self.r.len()
    }

    /// Number of D5 branes.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `d_0 = Σc = Σr`.
    pub fn d0(&self) -> usize {
        self.c.iter().sum()
    }

    /// `d_k` for `-m ≤ k ≤ n`.
    pub fn d(&self, k: i64) -> usize {
        if k <= 0 {
            let j = (-k) as usize;
            self.d0() - self.r.iter().take(j).sum::<usize>()
        } else {
            self.d0() - self.c.iter().take(k as usize).sum::<usize>()
        }
    }

    /// `(d_0, d_{-1}, …, d_{-m+1})`: dimensions of the D3 branes carrying
    /// Chern roots, indexed by `j = -k`.
    pub fn left_dims(&self) -> Vec<usize> {
        (0..self.m()).map(|j| self.d(-(j as i64))).collect()
    }

    /// The full dimension vector `(d_{-m}, …, d_0, …, d_n)`.
    pub fn dimension_vector(&self) -> Vec<usize> {
        (-(self.m() as i64)..=(self.n() as i64)).map(|k| self.d(k)).collect()
    }

    /// Dimension of the variety, `rank T_NS5 + rank T_D5`.
    pub fn dimension(&self) -> i64 {
        let (m, n) = (self.m() as i64, self.n() as i64);
        let d = |k: i64| -> i64 { if k < -m || k > n { 0 } else { self.d(k) as i64 } };
        let mut rank = 0;
        for k in -m + 1..=0 {
            rank += 2 * d(k) * d(k - 1);
            if k < 0 {
                rank -= 2 * d(k) * d(k);
            }
        }
        for k in 1..=n {
            rank += d(k - 1) + d(k) + d(k - 1) * d(k - 1) + d(k) * d(k);
        }
        for k in 0..=n {
            rank -= 2 * d(k) * d(k);
        }
        rank
    }

    /// The mirror diagram: `r!_i = m − c_{n+1−i}`, `c!_i = n − r_{m+1−i}`.
    pub fn mirror(&self) -> Result<BraneDiagram> {
        let (m, n) = (self.m(), self.n());
        let rm: Vec<i64> = (1..=n).map(|i| m as i64 - self.c[n - i] as i64).collect();
        let cm: Vec<i64> = (1..=m).map(|i| n as i64 - self.r[m - i] as i64).collect();
        if rm.iter().chain(cm.iter()).any(|&x| x < 0) {
            return Err(Error::Input("mirror charges would be negative".into()));
        }
        BraneDiagram::with_zero_charges(
            rm.into_iter().map(|x| x as usize).collect(),
            cm.into_iter().map(|x| x as usize).collect(),
        )
    }

    /// Whether every charge is positive.
    pub fn has_positive_charges(&self) -> bool {
        self.r.iter().chain(self.c.iter()).all(|&x| x > 0)
    }

    /// Slash notation of the diagram.
    pub fn slash_notation(&self) -> String {
        let mut s = String::new();
        for j in (0..self.m()).rev() {
            s.push('/');
            s.push_str(&self.d(-(j as i64)).to_string());
        }
        for k in 1..=self.n() {
            s.push('\\');
            if k < self.n() {
                s.push_str(&self.d(k as i64).to_string());
            }
        }
        s
    }
}

impl fmt::Display for BraneDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "r=({});c=({})", join(&self.r), join(&self.c))
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad charge `{x}`"))))
        .collect()
}

fn parse_charge_form(s: &str) -> Result<BraneDiagram> {
    let mut r = None;
    let mut c = None;
    for part in s.split(';').filter(|p| !p.is_empty()) {
        if let Some(v) = part.strip_prefix("r=") {
            r = Some(parse_list(v)?);
        } else if let Some(v) = part.strip_prefix("c=") {
            c = Some(parse_list(v)?);
        } else {
            return Err(Error::Parse(format!("unexpected component `{part}`")));
        }
    }
    match (r, c) {
        (Some(r), Some(c)) => BraneDiagram::new(r, c),
        _ => Err(Error::Parse("charge form needs both r=… and c=…".into())),
    }
}

fn parse_slash_form(s: &str) -> Result<BraneDiagram> {
    // Tokenize into a sequence of fivebranes and the multiplicities between them.
    let mut branes: Vec<char> = Vec::new();
    let mut mults: Vec<Option<usize>> = Vec::new();
    let mut num = String::new();
    for ch in s.chars() {
        match ch {
            '/' | '\\' => {
                if !branes.is_empty() {
                    let m = if num.is_empty() { None } else { Some(num.parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity `{num}`")))?) };
                    mults.push(m);
                } else if !num.is_empty() {
                    return Err(Error::Parse("diagram must start with a fivebrane".into()));
                }
                num.clear();
                branes.push(ch);
            }
            '0'..='9' => num.push(ch),
            _ => return Err(Error::Parse(format!("unexpected character `{ch}`"))),
        }
    }
    if branes.is_empty() {
        return Err(Error::Parse("no fivebranes".into()));
    }
    if !num.is_empty() {
        return Err(Error::Parse("diagram must end with a fivebrane".into()));
    }
    if mults.iter().any(Option::is_none) {
        return Err(Error::Parse("missing D3 multiplicity between consecutive fivebranes".into()));
    }
    let mults: Vec<usize> = mults.into_iter().map(Option::unwrap).collect();
    let first_d5 = branes.iter().position(|&b| b == '\\').ok_or_else(|| Error::Parse("no D5 brane".into()))?;
    if branes[first_d5..].contains(&'/') {
        return Err(Error::Parse("diagram is not separated: NS5 brane right of a D5 brane".into()));
    }
    if first_d5 == 0 {
        return Err(Error::Parse("no NS5 brane".into()));
    }
    // Multiplicities with the outer zeros: full[i] is the D3 brane left of brane i.
    let mut full = vec![0usize];
    full.extend(mults);
    full.push(0);
    let m = first_d5;
    let n = branes.len() - m;
    let mut r = Vec::with_capacity(m);
    for i in 1..=m {
        // Z_i is brane index m - i; charge = right multiplicity - left multiplicity.
        let idx = m - i;
        let (left, right) = (full[idx] as i64, full[idx + 1] as i64);
        if right <= left {
            return Err(Error::Parse(format!("NS5 brane Z_{i} would have non-positive charge {}", right - left)));
        }
        r.push((right - left) as usize);
    }
    let mut c = Vec::with_capacity(n);
    for k in 1..=n {
        let idx = m + k - 1;
        let (left, right) = (full[idx] as i64, full[idx + 1] as i64);
        if left <= right {
            return Err(Error::Parse(format!("D5 brane A_{k} would have non-positive charge {}", left - right)));
        }
        c.push((left - right) as usize);
    }
    BraneDiagram::new(r, c)
}
