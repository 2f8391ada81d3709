//! The kernel function and the ⋆-product.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::graded::{charges_of, GradedFunction};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Monomial, Term, Var};

/// `e*_ℏ(A, B) = ∏ atom(ℏ b / a)` (with `ℏ` omitted for the unshifted `e*`).
fn pair_factors(a: &[Var], b: &[Var], shifted: bool, power: i32, out: &mut Term) {
    for &x in a {
        for &y in b {
            let mut arg = Monomial::var(y).div(&Monomial::var(x));
            if shifted {
                arg = arg.mul(&Monomial::hbar(1));
            }
            out.factors.push(crate::expr::Factor::new(arg, power));
        }
    }
}

/// The kernel `φ*_{d',d''}` with the primed and double-primed roots of level
/// `-j` given by `prime[j]` and `dprime[j]`.
pub fn kernel_with(prime: &[Vec<Var>], dprime: &[Vec<Var>]) -> Term {
    let levels = prime.len().max(dprime.len());
    let get = |v: &[Vec<Var>], j: usize| -> Vec<Var> { v.get(j).cloned().unwrap_or_default() };
    let mut term = Term::one();
    for j in 1..levels {
        let (tp, tpp) = (get(prime, j), get(dprime, j));
        let (tp_up, tpp_up) = (get(prime, j - 1), get(dprime, j - 1));
        pair_factors(&tp, &tpp, true, 1, &mut term);
        pair_factors(&tpp_up, &tp, true, 1, &mut term);
        pair_factors(&tpp, &tp_up, false, 1, &mut term);
        pair_factors(&tpp, &tp, false, -1, &mut term);
    }
    term
}

/// The kernel `φ*_{d',d''}` for the first shuffle: the primed roots of each
/// level are `t_{-j,1..d'_j}` and the double-primed ones follow them.
pub fn kernel(d1: &[usize], d2: &[usize], flavor: Flavor) -> FlavorClass {
    let levels = d1.len().max(d2.len());
    let mut prime = Vec::new();
    let mut dprime = Vec::new();
    for j in 0..levels {
        let (a, b) = (d1.get(j).copied().unwrap_or(0), d2.get(j).copied().unwrap_or(0));
        prime.push((1..=a).map(|i| Var::t(-(j as i64), i)).collect());
        dprime.push((a + 1..=a + b).map(|i| Var::t(-(j as i64), i)).collect());
    }
    FlavorClass::from_term(flavor, kernel_with(&prime, &dprime))
}

/// All `size`-element subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < size - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Every shuffle as a list of chosen primed positions per level `j ≥ 1`
/// (0-based), levels combined lexicographically.
fn shuffles(d: &[usize], d1: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut all: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for j in 1..d.len() {
        let choices = subsets(d[j], d1.get(j).copied().unwrap_or(0));
        let mut next = Vec::with_capacity(all.len() * choices.len());
        for prefix in &all {
            for ch in &choices {
                let mut p = prefix.clone();
                p.push(ch.clone());
                next.push(p);
            }
        }
        all = next;
    }
    all
}

/// The ⋆-product `f' ⋆ f''`: the sum over shuffles of
/// `f'(t') · Z_{d'}[f''(t'')] · φ*_{d',d''}`.
///
/// Level-0 roots are concatenated (`t'_0` first); the terms come out in the
/// lexicographic order of the shuffles, independent of scheduling.
pub fn star(f1: &GradedFunction, f2: &GradedFunction) -> Result<GradedFunction> {
    if f1.flavor() != f2.flavor() {
        return Err(Error::Input(format!("flavor mismatch {} vs {}", f1.flavor(), f2.flavor())));
    }
    let flavor = f1.flavor();
    let levels = f1.depth().max(f2.depth());
    let d1: Vec<usize> = (0..levels).map(|j| f1.dim(j)).collect();
    let d2: Vec<usize> = (0..levels).map(|j| f2.dim(j)).collect();
    let d: Vec<usize> = d1.iter().zip(&d2).map(|(a, b)| a + b).collect();
    let shifted = f2.class.z_shift(&charges_of(&d1));
    let pieces: Vec<Vec<Term>> = shuffles(&d, &d1)
        .par_iter()
        .map(|sh| {
            let mut prime: Vec<Vec<Var>> = Vec::with_capacity(levels);
            let mut dprime: Vec<Vec<Var>> = Vec::with_capacity(levels);
            for j in 0..levels {
                let k = -(j as i64);
                if j == 0 {
                    prime.push((1..=d1[0]).map(|i| Var::t(0, i)).collect());
                    dprime.push((d1[0] + 1..=d[0]).map(|i| Var::t(0, i)).collect());
                } else {
                    let chosen = &sh[j - 1];
                    prime.push(chosen.iter().map(|&i| Var::t(k, i + 1)).collect());
                    dprime.push((0..d[j]).filter(|i| !chosen.contains(i)).map(|i| Var::t(k, i + 1)).collect());
                }
            }
            let rename = |targets: &[Vec<Var>]| -> BTreeMap<Var, Var> {
                let mut map = BTreeMap::new();
                for (j, vs) in targets.iter().enumerate() {
                    for (i, v) in vs.iter().enumerate() {
                        map.insert(Var::t(-(j as i64), i + 1), *v);
                    }
                }
                map
            };
            let a = f1.class.rename(&rename(&prime));
            let b = shifted.rename(&rename(&dprime));
            let ker = kernel_with(&prime, &dprime);
            let mut terms = Vec::with_capacity(a.len() * b.len());
            for x in &a.terms {
                for y in &b.terms {
                    terms.push(x.mul(y).mul(&ker));
                }
            }
            terms
        })
        .collect();
    let class = FlavorClass { flavor, terms: pieces.into_iter().flatten().collect() };
    GradedFunction::new(class, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, EvalCtx, EvalPoint, Substitution};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(k: i64, i: usize) -> Monomial {
        Monomial::var(Var::t(k, i))
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn kernel_of_two_rank_one_pieces() {
        // d' = d'' = (1, 1): θ(t_{-12}/t_{-11}·ℏ) θ(t_{-11}/t_{02}·ℏ) θ(t_{01}/t_{-12}) / θ(t_{-11}/t_{-12})
        let k = kernel(&[1, 1], &[1, 1], Flavor::E);
        let h = Monomial::hbar(1);
        let want = vec![
            (t(-1, 2).div(&t(-1, 1)).mul(&h), 1),
            (t(-1, 1).div(&t(0, 2)).mul(&h), 1),
            (t(0, 1).div(&t(-1, 2)), 1),
            (t(-1, 1).div(&t(-1, 2)), -1),
        ];
        let got: Vec<(Monomial, i32)> = k.terms[0].factors.iter().map(|f| (f.arg.clone(), f.power)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn kernel_is_trivial_without_primed_roots() {
        let k = kernel(&[0, 0], &[2, 1], Flavor::E);
        assert!(k.terms[0].factors.is_empty());
    }

    #[test]
    fn unit_is_neutral() {
        let f = GradedFunction::new(FlavorClass::from_term(Flavor::E, Term::atom(t(-1, 1).div(&t(0, 1)), 1)), vec![1, 1]).unwrap();
        let u = GradedFunction::unit(Flavor::E);
        assert_eq!(star(&u, &f).unwrap(), f);
        assert_eq!(star(&f, &u).unwrap().class.terms.len(), 1);
    }

    #[test]
    fn term_count_is_a_product_of_binomials() {
        let a = GradedFunction::new(FlavorClass::one(Flavor::H), vec![1, 1, 1]).unwrap();
        let b = GradedFunction::new(FlavorClass::one(Flavor::H), vec![1, 2, 1]).unwrap();
        // C(3,1) · C(2,1) = 6
        assert_eq!(star(&a, &b).unwrap().class.len(), 6);
    }

    #[test]
    fn cohomological_kernel_matches_additive_reading() {
        // e^H_ℏ(A,B) = b − a + ℏ is the linear form of ℏ b/a.
        let k = kernel(&[1, 1], &[1, 1], Flavor::H);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vars = [Var::t(0, 1), Var::t(0, 2), Var::t(-1, 1), Var::t(-1, 2)];
        let pt = EvalPoint::random(&mut rng, 0, 0, &vars);
        let v = |x: Var| pt.logs[&x];
        let h = pt.logs[&Var::Hbar];
        let want = (v(Var::t(-1, 2)) - v(Var::t(-1, 1)) + h) * (v(Var::t(-1, 1)) - v(Var::t(0, 2)) + h) * (v(Var::t(0, 1)) - v(Var::t(-1, 2)))
            / (v(Var::t(-1, 1)) - v(Var::t(-1, 2)));
        let got = evaluate(&k, &Substitution::new(), &pt, &EvalCtx::new(Complex64::new(0.1, 0.0))).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }
}
