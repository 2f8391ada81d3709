//! Elements of the shuffle algebra: a flavored class together with its left
//! dimension vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Var};

/// A function in `t_{k,i}` (`k ≤ 0`, `1 ≤ i ≤ d_k`), `ℏ` and possibly `z`,
/// symmetric in each level `k < 0`.
///
/// `dims[j]` is `d_{-j}`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFunction {
    /// The expression.
    pub class: FlavorClass,
    /// Left dimension vector `(d_0, d_{-1}, d_{-2}, …)`.
    pub dims: Vec<usize>,
}

impl GradedFunction {
    /// Wraps a class, checking that its Chern roots fit `dims`.
    pub fn new(class: FlavorClass, dims: Vec<usize>) -> Result<GradedFunction> {
        let dims = trim(dims);
        for v in class.variables() {
            if let Var::T(k, i) = v {
                let j = (-k) as usize;
                if k > 0 || j >= dims.len() || i as usize > dims[j] {
                    return Err(Error::Input(format!("variable {v} outside dimension vector {dims:?}")));
                }
            }
        }
        Ok(GradedFunction { class, dims })
    }

    /// The unit `1` in degree 0.
    pub fn unit(flavor: Flavor) -> GradedFunction {
        GradedFunction { class: FlavorClass::one(flavor), dims: Vec::new() }
    }

    /// `d_{-j}` (zero beyond the stored length).
    pub fn dim(&self, j: usize) -> usize {
        self.dims.get(j).copied().unwrap_or(0)
    }

    /// The flavor.
    pub fn flavor(&self) -> Flavor {
        self.class.flavor
    }

    /// All Chern-root variables of the dimension vector.
    pub fn t_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for (j, &d) in self.dims.iter().enumerate() {
            for i in 1..=d {
                out.push(Var::t(-(j as i64), i));
            }
        }
        out
    }

    /// Number of NS5 charges this function's z-shift needs: the length of
    /// the dimension vector.
    pub fn depth(&self) -> usize {
        self.dims.len()
    }
}

/// Removes trailing zeros.
pub fn trim(mut dims: Vec<usize>) -> Vec<usize> {
    while dims.last() == Some(&0) {
        dims.pop();
    }
    dims
}

/// `(c_1, c_2, …)` with `c_k = d_{-k+1} − d_{-k}`: the NS5 charges read off a
/// left dimension vector.
pub fn charges_of(dims: &[usize]) -> Vec<i64> {
    (1..=dims.len())
        .map(|k| dims[k - 1] as i64 - dims.get(k).copied().unwrap_or(0) as i64)
        .collect()
}
