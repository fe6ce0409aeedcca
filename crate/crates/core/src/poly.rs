//! Polynomials with rational coefficients and fraction-free elimination
//! over them.
//!
//! [`MPoly`] is a sparse multivariate polynomial used for generic-point
//! rank computations; [`UniPoly`] is a dense univariate polynomial used for
//! one-parameter families. Both implement [`ExactRing`], which is all the
//! Bareiss elimination in [`rank_profile`] and [`determinant`] needs.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// An integral domain with exact division, as needed by Bareiss elimination.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `self / other` when the division is exact.
    fn exact_div(&self, other: &Self) -> Option<Self>;
    /// `(degree, number of terms)`, used to pick low-degree pivots.
    fn weight(&self) -> (usize, usize);
}

impl ExactRing for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }
    fn weight(&self) -> (usize, usize) {
        (0, 1)
    }
}

/// Sparse multivariate polynomial; monomials keyed by exponent vectors,
/// ordered lexicographically.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Scalar::one());
        p
    }

    /// `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
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

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient by multivariate division with respect to lex order;
    /// `None` if a nonzero remainder appears.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (lead_e, lead_c) = d.terms.last_key_value()?;
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((e, c)) = rem.terms.last_key_value() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            for (de, dc) in &d.terms {
                let te: Vec<u32> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(dc * &qc));
            }
            q.add_term(qe, qc);
        }
        Some(q)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ExactRing for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.nvars, Scalar::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }
    fn neg_ref(&self) -> Self {
        self.scale(&-Scalar::one())
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
    fn weight(&self) -> (usize, usize) {
        (self.total_degree(), self.num_terms())
    }
}

/// Dense univariate polynomial, coefficients from degree 0 upward, with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Scalar::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(Self::constant(Scalar::one()), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = d.degree()?;
        let lead = d.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Some((Self::zero(), Self::zero()));
        };
        if sd < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![Scalar::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = &rem[i + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        Some((Self::new(q), Self::new(rem)))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * t + c)
    }

    /// Parses expressions in `t` such as `"t/1"`, `"3/2*t^2 - t + 1"`,
    /// `"(t+1)*(t-2)"`. Division is allowed by nonzero constants only.
    pub fn parse(s: &str) -> Result<UniPoly> {
        let mut p = PolyParser {
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src: s,
        };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }

    /// Canonical text form accepted by [`UniPoly::parse`].
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Scalar::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl ExactRing for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn one_like(&self) -> Self {
        UniPoly::constant(Scalar::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_ref(&self) -> Self {
        self.scale(&-Scalar::one())
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other)?;
        r.is_zero().then_some(q)
    }
    fn weight(&self) -> (usize, usize) {
        (self.degree().unwrap_or(0), self.coeffs.iter().filter(|c| !c.is_zero()).count())
    }
}

struct PolyParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl PolyParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in polynomial {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<UniPoly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.scale(&-Scalar::one())
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<UniPoly> {
        let mut acc = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let f = self.power()?;
            if c == '*' {
                acc = acc.mul(&f);
            } else {
                match f.degree() {
                    Some(0) => acc = acc.scale(&f.coeffs[0].recip()),
                    None => return Err(self.err("division by zero")),
                    _ => return Err(self.err("division by a non-constant")),
                }
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<UniPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<UniPoly> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(UniPoly::t())
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.atom()?.scale(&-Scalar::one()))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: num_bigint::BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(UniPoly::constant(Scalar::from_integer(n)))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

/// Column rank profile of a matrix over an exact ring, by fraction-free
/// (Bareiss) elimination. Within each column the pivot is the nonzero entry
/// of lowest weight among the remaining rows.
pub fn rank_profile<R: ExactRing>(mut a: Vec<Vec<R>>, ncols: usize) -> Result<Vec<usize>> {
    Ok(bareiss(&mut a, ncols)?.0)
}

/// Determinant of a square matrix over an exact ring.
pub fn determinant<R: ExactRing>(mut a: Vec<Vec<R>>, unit: &R) -> Result<R> {
    let n = a.len();
    if n == 0 {
        return Ok(unit.one_like());
    }
    let (profile, negate) = bareiss(&mut a, n)?;
    if profile.len() < n {
        return Ok(unit.zero_like());
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg_ref() } else { d })
}

fn bareiss<R: ExactRing>(a: &mut [Vec<R>], ncols: usize) -> Result<(Vec<usize>, bool)> {
    let nrows = a.len();
    let mut profile = Vec::new();
    let Some(first) = a.first().and_then(|r| r.first()) else {
        return Ok((profile, false));
    };
    let mut prev = first.one_like();
    let mut negate = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let pivot = (r..nrows)
            .filter(|&i| !a[i][c].is_zero_elem())
            .min_by_key(|&i| (a[i][c].weight(), i));
        let Some(p) = pivot else { continue };
        if p != r {
            a.swap(p, r);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..ncols {
                let num = prow[c].mul_ref(&row[j]).sub_ref(&row[c].mul_ref(&prow[j]));
                row[j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Internal("inexact division in fraction-free elimination".into()))?;
            }
            row[c] = row[c].zero_like();
        }
        prev = a[r][c].clone();
        profile.push(c);
        r += 1;
    }
    Ok((profile, negate))
}
