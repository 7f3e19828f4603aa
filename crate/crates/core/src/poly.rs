//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a BTreeMap under graded lexicographic monomial order,
//! so iteration, printing and serialization are canonical.

use crate::rat::Rat;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial. Ordered by total degree, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A sparse polynomial in `nvars` variables. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(Monomial(exps), Rat::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: Rat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial(exps), coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Leading term in graded lex order, as a display string.
    pub fn leading_term_string(&self) -> String {
        match self.terms.iter().next_back() {
            None => "0".to_string(),
            Some((m, c)) => format_term(m, c),
        }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, coeff: &Rat) {
        assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        let key = Monomial(exps);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.0.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), s * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb).0, &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        assert!(i < self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            out.add_term(exps, &(c * &Rat::from_int(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &point[i].pow(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `args[i]` for variable `i`. All arguments must share one
    /// variable count, which becomes the output's.
    pub fn subst(&self, args: &[MultiPoly]) -> MultiPoly {
        assert_eq!(args.len(), self.nvars);
        let out_vars = args.first().map_or(0, MultiPoly::nvars);
        assert!(args.iter().all(|a| a.nvars == out_vars));
        let mut acc = MultiPoly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&args[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Collects coefficients of powers of variable `var`, dropping that
    /// variable from the result. Returned in ascending power order; absent
    /// powers mean zero coefficients.
    pub fn coefficients_of(&self, var: usize) -> Vec<(u32, MultiPoly)> {
        assert!(var < self.nvars);
        let mut buckets: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let power = m.0[var];
            let mut exps = m.0.clone();
            exps.remove(var);
            buckets
                .entry(power)
                .or_insert_with(|| MultiPoly::zero(self.nvars - 1))
                .add_term(exps, c);
        }
        buckets.retain(|_, p| !p.is_zero());
        buckets.into_iter().collect()
    }

    /// Appends a fresh variable (exponent 0 everywhere).
    pub fn extend_vars(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.push(0);
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }
}

fn format_term(m: &Monomial, c: &Rat) -> String {
    let vars: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i)
                } else {
                    format!("x{}^{}", i, e)
                }
            })
            .collect();
    if vars.is_empty() {
        c.to_string()
    } else if c.is_one() {
        vars.join("*")
    } else if (-c).is_one() {
        format!("-{}", vars.join("*"))
    } else {
        format!("{}*{}", c, vars.join("*"))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format_term(m, c))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y)); // x^2 - y^2
        let mut expect = MultiPoly::zero(2);
        expect.add_term(vec![2, 0], &r(1));
        expect.add_term(vec![0, 2], &r(-1));
        assert_eq!(p, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        // f = 3 x^2 y + y
        let mut f = MultiPoly::zero(2);
        f.add_term(vec![2, 1], &r(3));
        f.add_term(vec![0, 1], &r(1));
        let fx = f.partial(0);
        assert_eq!(fx.eval(&[r(2), r(5)]), r(60));
        let fy = f.partial(1);
        assert_eq!(fy.eval(&[r(2), r(5)]), r(13));
        assert_eq!(f.eval(&[r(1), r(1)]), r(4));
    }

    #[test]
    fn coefficients_of_extra_var() {
        // p = (x + t)^2 in vars (x, t): coefficients of t are x^2, 2x, 1
        let x = MultiPoly::var(2, 0);
        let t = MultiPoly::var(2, 1);
        let p = x.add(&t).pow(2);
        let coeffs = p.coefficients_of(1);
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[0].0, 0);
        assert_eq!(coeffs[0].1, MultiPoly::var(1, 0).pow(2));
        assert_eq!(coeffs[1].1, MultiPoly::var(1, 0).scale(&r(2)));
        assert_eq!(coeffs[2].1, MultiPoly::constant(1, r(1)));
    }

    #[test]
    fn subst_composes() {
        // f(u) = u^2, u = x + 1  =>  x^2 + 2x + 1
        let f = MultiPoly::var(1, 0).pow(2);
        let u = MultiPoly::var(1, 0).add(&MultiPoly::constant(1, r(1)));
        let g = f.subst(&[u]);
        assert_eq!(g.eval(&[r(3)]), r(16));
        assert_eq!(g.num_terms(), 3);
    }

    #[test]
    fn graded_lex_ordering() {
        let a = Monomial(vec![0, 2]); // degree 2
        let b = Monomial(vec![1, 0]); // degree 1
        let c = Monomial(vec![1, 1]); // degree 2, lex-larger than a
        assert!(b < a);
        assert!(a < c);
    }
}
