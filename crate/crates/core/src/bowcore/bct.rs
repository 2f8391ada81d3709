//! Fixed points as binary contingency tables, chambers, crossings and the
//! mirror involution.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::diagram::BraneDiagram;
use crate::error::{Error, Result};

/// A torus fixed point, encoded by its 01-matrix: entry `(k, l)` (1-based)
/// is 1 iff NS5 brane `Z_k` is tied to D5 brane `A_l`.
///
/// Serializes as a nested array of integers, row `k-1` being `Z_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct FixedPoint {
    rows: Vec<Vec<u8>>,
}

impl TryFrom<Vec<Vec<u8>>> for FixedPoint {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u8>>) -> Result<FixedPoint> {
        FixedPoint::from_rows(rows)
    }
}

impl From<FixedPoint> for Vec<Vec<u8>> {
    fn from(f: FixedPoint) -> Vec<Vec<u8>> {
        f.rows
    }
}

impl FixedPoint {
    /// Builds a fixed point from its rows; every entry must be 0 or 1 and all
    /// rows must have the same positive length.
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<FixedPoint> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || n == 0 {
            return Err(Error::Input("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|&x| x > 1) {
            return Err(Error::Input("matrix entries must be 0 or 1".into()));
        }
        Ok(FixedPoint { rows })
    }

    /// Builds the fixed point `∪ 1_{kl}` on an `m × n` grid.
    pub fn from_ties(m: usize, n: usize, ties: &[(usize, usize)]) -> Result<FixedPoint> {
        let mut rows = vec![vec![0u8; n]; m];
        for &(k, l) in ties {
            if k == 0 || l == 0 || k > m || l > n {
                return Err(Error::Input(format!("tie 1_{{{k}{l}}} outside a {m}x{n} grid")));
            }
            if rows[k - 1][l - 1] == 1 {
                return Err(Error::Input(format!("tie 1_{{{k}{l}}} listed twice")));
            }
            rows[k - 1][l - 1] = 1;
        }
        FixedPoint::from_rows(rows)
    }

    /// Number of NS5 branes (rows).
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of D5 branes (columns).
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// Entry `T_{k,l}` (1-based).
    pub fn get(&self, k: usize, l: usize) -> bool {
        self.rows[k - 1][l - 1] == 1
    }

    /// The rows of the matrix.
    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Ties `(k, l)` in row-major order.
    pub fn ties(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x == 1 {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Row sums (NS5 charges).
    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect()
    }

    /// Column sums (D5 charges).
    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.n()).map(|j| self.rows.iter().map(|r| r[j] as usize).sum()).collect()
    }

    /// The diagram whose charges are this matrix's margins (zero charges allowed).
    pub fn diagram(&self) -> Result<BraneDiagram> {
        BraneDiagram::with_zero_charges(self.row_sums(), self.col_sums())
    }

    /// Whether the margins are exactly the charges of `d`.
    pub fn fits(&self, d: &BraneDiagram) -> bool {
        self.row_sums() == d.r() && self.col_sums() == d.c()
    }

    /// Number of crossing tie pairs: unordered pairs of ties `(k,l)`, `(k',l')`
    /// with `(k − k')(l − l') < 0`.
    pub fn crossings(&self) -> usize {
        let ties = self.ties();
        let mut count = 0;
        for (i, &(k, l)) in ties.iter().enumerate() {
            for &(k2, l2) in &ties[i + 1..] {
                if (k as i64 - k2 as i64) * (l as i64 - l2 as i64) < 0 {
                    count += 1;
                }
            }
        }
        count
    }

    /// The mirror fixed point: `T!_{i,j} = 1 − T_{m+1−j, n+1−i}`, an `n × m`
    /// matrix (reflection across the anti-diagonal followed by negation).
    pub fn mirror(&self) -> FixedPoint {
        let (m, n) = (self.m(), self.n());
        let rows = (1..=n)
            .map(|i| (1..=m).map(|j| 1 - self.rows[m - j][n - i]).collect())
            .collect();
        FixedPoint { rows }
    }

    /// Tie-set notation such as `1_{12} ∪ 1_{21}`.
    pub fn tie_notation(&self) -> String {
        self.ties().iter().map(|(k, l)| format!("1_{{{k}{l}}}")).collect::<Vec<_>>().join(" ∪ ")
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Gale–Ryser test: does a 01-matrix with row sums `rows` and column sums
/// `cols` exist?
pub fn margins_feasible(rows: &[usize], cols: &[usize]) -> bool {
    let n = cols.len();
    if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() || rows.iter().any(|&r| r > n) {
        return false;
    }
    let mut c: Vec<usize> = cols.to_vec();
    c.sort_unstable_by(|a, b| b.cmp(a));
    let mut partial_c = 0;
    let mut partial_conj = 0;
    for (k, ck) in c.iter().enumerate() {
        partial_c += ck;
        // k-th part of the conjugate of `rows`: #{i : rows_i ≥ k + 1}.
        partial_conj += rows.iter().filter(|&&r| r > k).count();
        if partial_c > partial_conj {
            return false;
        }
    }
    true
}

/// All fixed points of `X(r, c)`, i.e. 01-matrices with row sums `r` and
/// column sums `c`, in row-major lexicographic order with 1 before 0.
///
/// An empty result means the diagram has no fixed points.
pub fn enumerate_fixed_points(r: &[usize], c: &[usize]) -> Vec<FixedPoint> {
    let (m, n) = (r.len(), c.len());
    let mut out = Vec::new();
    if m == 0 || n == 0 || !margins_feasible(r, c) {
        return out;
    }
    let mut rows = vec![vec![0u8; n]; m];
    let mut col_left = c.to_vec();
    fill_row(0, r, &mut rows, &mut col_left, &mut out);
    out
}

fn fill_row(i: usize, r: &[usize], rows: &mut Vec<Vec<u8>>, col_left: &mut Vec<usize>, out: &mut Vec<FixedPoint>) {
    if i == r.len() {
        out.push(FixedPoint { rows: rows.clone() });
        return;
    }
    fill_cell(i, 0, r[i], r, rows, col_left, out);
}

fn fill_cell(
    i: usize,
    j: usize,
    need: usize,
    r: &[usize],
    rows: &mut Vec<Vec<u8>>,
    col_left: &mut Vec<usize>,
    out: &mut Vec<FixedPoint>,
) {
    let n = col_left.len();
    if j == n {
        if need == 0 && margins_feasible(&r[i + 1..], col_left) {
            fill_row(i + 1, r, rows, col_left, out);
        }
        return;
    }
    if need > 0 && col_left[j] > 0 {
        rows[i][j] = 1;
        col_left[j] -= 1;
        fill_cell(i, j + 1, need - 1, r, rows, col_left, out);
        col_left[j] += 1;
        rows[i][j] = 0;
    }
    if n - j > need {
        fill_cell(i, j + 1, need, r, rows, col_left, out);
    }
}

/// A chamber `a_{σ(1)} < … < a_{σ(n)}`, stored as the 1-based permutation σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Chamber {
    sigma: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Chamber {
    type Error = Error;

    fn try_from(sigma: Vec<usize>) -> Result<Chamber> {
        Chamber::new(sigma)
    }
}

impl From<Chamber> for Vec<usize> {
    fn from(c: Chamber) -> Vec<usize> {
        c.sigma
    }
}

impl Chamber {
    /// Validates that `sigma` is a permutation of `1..=n`.
    pub fn new(sigma: Vec<usize>) -> Result<Chamber> {
        let n = sigma.len();
        let mut seen = vec![false; n + 1];
        for &s in &sigma {
            if s == 0 || s > n || seen[s] {
                return Err(Error::Input(format!("{sigma:?} is not a permutation of 1..{n}")));
            }
            seen[s] = true;
        }
        Ok(Chamber { sigma })
    }

    /// The identity chamber `a_1 < … < a_n`.
    pub fn identity(n: usize) -> Chamber {
        Chamber { sigma: (1..=n).collect() }
    }

    /// Parses `"2,3,1"`.
    pub fn parse(s: &str) -> Result<Chamber> {
        let sigma = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad chamber entry `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        Chamber::new(sigma)
    }

    /// `σ(i)`.
    pub fn sigma(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// `σ⁻¹(l)`: the position of `a_l` in the chamber ordering.
    pub fn position(&self, l: usize) -> usize {
        self.sigma.iter().position(|&s| s == l).expect("valid permutation") + 1
    }

    /// Number of D5 branes.
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// The permutation as a list.
    pub fn as_slice(&self) -> &[usize] {
        &self.sigma
    }

    /// Whether this is the identity permutation.
    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| s == i + 1)
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sigma.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_has_twelve_fixed_points() {
        let fps = enumerate_fixed_points(&[1, 1, 2, 1], &[2, 2, 1]);
        assert_eq!(fps.len(), 12);
        assert!(fps.iter().all(|f| f.row_sums() == [1, 1, 2, 1] && f.col_sums() == [2, 2, 1]));
        let mut sorted = fps.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 12);
    }

    #[test]
    fn order_puts_ones_first() {
        let fps = enumerate_fixed_points(&[1, 1], &[1, 1]);
        assert_eq!(fps[0].rows(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(fps[1].rows(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn single_tie_and_infeasible_margins() {
        assert_eq!(enumerate_fixed_points(&[1], &[1])[0].rows(), &[vec![1]]);
        assert!(enumerate_fixed_points(&[3], &[1, 1]).is_empty());
        assert!(enumerate_fixed_points(&[2, 0], &[2]).is_empty());
    }

    #[test]
    fn crossings_of_projective_line_points() {
        let f1 = FixedPoint::from_ties(2, 2, &[(1, 2), (2, 1)]).unwrap();
        let f2 = FixedPoint::from_ties(2, 2, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!((f1.crossings(), f2.crossings()), (1, 0));
    }

    #[test]
    fn mirror_of_displayed_matrix() {
        let f = FixedPoint::from_rows(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![1, 0, 0]]).unwrap();
        let expected = [vec![1, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 0, 1, 1]];
        assert_eq!(f.mirror().rows(), &expected[..]);
        assert_eq!(f.mirror().mirror(), f);
        let ones = FixedPoint::from_rows(vec![vec![1, 1, 1]; 2]).unwrap();
        assert_eq!(ones.mirror().rows(), &[vec![0, 0], vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn chamber_positions() {
        let s = Chamber::parse("2,3,1").unwrap();
        assert_eq!((s.position(2), s.position(3), s.position(1)), (1, 2, 3));
        assert!(Chamber::parse("1,1").is_err());
        assert!(Chamber::identity(3).is_identity());
    }

    #[test]
    fn fixed_point_json_is_nested_arrays() {
        let f = FixedPoint::from_ties(2, 2, &[(1, 2), (2, 1)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[0,1],[1,0]]");
        assert_eq!(serde_json::from_str::<FixedPoint>(&s).unwrap(), f);
        assert!(serde_json::from_str::<FixedPoint>("[[2]]").is_err());
    }
}
