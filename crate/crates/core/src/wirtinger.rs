//! Exact polynomials in `z, z̄, w, w̄` with complex-rational coefficients.
//!
//! The variables are treated as four independent symbols, so [`WirtingerPoly::diff`]
//! is the Wirtinger derivative. Evaluation always substitutes `z̄ = conj(z)` and
//! `w̄ = conj(w)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math;
use crate::point::PointC2;

pub type Rational = BigRational;

/// Parses a decimal (`-1.25`, `3e-2`) or fraction (`3/4`) into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn from_int(re: i64, im: i64) -> Self {
        ComplexQ::new(
            Rational::from_integer(BigInt::from(re)),
            Rational::from_integer(BigInt::from(im)),
        )
    }

    pub fn zero() -> Self {
        ComplexQ::from_int(0, 0)
    }

    pub fn one() -> Self {
        ComplexQ::from_int(1, 0)
    }

    pub fn i() -> Self {
        ComplexQ::from_int(0, 1)
    }

    /// Exact rational image of a finite float pair.
    pub fn from_f64(c: Complex64) -> Option<Self> {
        Some(ComplexQ::new(
            Rational::from_float(c.re)?,
            Rational::from_float(c.im)?,
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexQ::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_f64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ComplexQ::new(&self.re * k, &self.im * k)
    }
}

impl Add for &ComplexQ {
    type Output = ComplexQ;
    fn add(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexQ {
    type Output = ComplexQ;
    fn sub(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexQ {
    type Output = ComplexQ;
    fn mul(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// One of the four Wirtinger variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z,
    ZBar,
    W,
    WBar,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Z, Var::ZBar, Var::W, Var::WBar];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::ZBar => "zbar",
            Var::W => "w",
            Var::WBar => "wbar",
        }
    }
}

/// Exponent quadruple `(a, b, c, d)` of `z^a z̄^b w^c w̄^d`; ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn degree(self) -> u32 {
        self.0.iter().sum()
    }

    /// Exponents of the conjugate monomial: `(b, a, d, c)`.
    pub fn conj(self) -> Monomial {
        let [a, b, c, d] = self.0;
        Monomial([b, a, d, c])
    }

    pub fn exponent(self, var: Var) -> u32 {
        self.0[var.index()]
    }

    fn mul(self, other: Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0) {
            *x += y;
        }
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for var in Var::ALL {
            let e = self.exponent(var);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(var.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Homogeneity of a nonzero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(u32),
    Inhomogeneous,
}

/// Polynomial in `z, z̄, w, w̄` with exact complex-rational coefficients, kept in
/// canonical form: no zero coefficient is stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WirtingerPoly {
    terms: BTreeMap<Monomial, ComplexQ>,
}

impl WirtingerPoly {
    pub fn zero() -> Self {
        WirtingerPoly::default()
    }

    pub fn constant(c: ComplexQ) -> Self {
        WirtingerPoly::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: ComplexQ) -> Self {
        let mut p = WirtingerPoly::zero();
        p.add_term(m, c);
        p
    }

    /// `k · z^a z̄^b w^c w̄^d` with an integer coefficient.
    pub fn monomial(exps: [u32; 4], k: i64) -> Self {
        WirtingerPoly::term(Monomial(exps), ComplexQ::from_int(k, 0))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        WirtingerPoly::monomial(e, 1)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ComplexQ)>,
    {
        let mut p = WirtingerPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: ComplexQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ComplexQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Option<&ComplexQ> {
        self.terms.get(&m)
    }

    pub fn scale(&self, c: &ComplexQ) -> Self {
        WirtingerPoly::from_terms(self.terms.iter().map(|(m, k)| (*m, k * c)))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&ComplexQ::from_int(k, 0))
    }

    /// Formal partial derivative with respect to `var`.
    pub fn diff(&self, var: Var) -> Self {
        let i = var.index();
        WirtingerPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[i];
            if e == 0 {
                return None;
            }
            let mut exps = m.0;
            exps[i] -= 1;
            let k = Rational::from_integer(BigInt::from(e));
            Some((Monomial(exps), c.scale(&k)))
        }))
    }

    /// Term-wise conjugate: the coefficient of `(a,b,c,d)` moves, conjugated, to `(b,a,d,c)`.
    /// This is the polynomial of `conj(p(z,w))`.
    pub fn conj_partner(&self) -> Self {
        WirtingerPoly::from_terms(self.terms.iter().map(|(m, c)| (m.conj(), c.conj())))
    }

    /// Whether the polynomial takes real values on conjugate-consistent points.
    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| self.terms.get(&m.conj()).is_some_and(|p| *p == c.conj()))
    }

    pub fn homogeneity_degree(&self) -> Result<Degree> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next().ok_or(Error::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok(Degree::Homogeneous(first))
        } else {
            Ok(Degree::Inhomogeneous)
        }
    }

    /// True if every term has total degree `m` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, m: u32) -> bool {
        self.terms.keys().all(|mono| mono.degree() == m)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Exact evaluation at `q` (with `z̄ = conj(z)`, `w̄ = conj(w)`), rounded once at the end.
    pub fn eval(&self, q: PointC2) -> Complex64 {
        match self.eval_exact(q) {
            Some(v) => v.to_f64(),
            None => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    /// Exact value at a float point, or `None` for non-finite input.
    pub fn eval_exact(&self, q: PointC2) -> Option<ComplexQ> {
        let z = ComplexQ::from_f64(q.z)?;
        let w = ComplexQ::from_f64(q.w)?;
        let bases = [z.clone(), z.conj(), w.clone(), w.conj()];
        let mut powers: [Vec<ComplexQ>; 4] = Default::default();
        for (k, base) in bases.iter().enumerate() {
            let top = self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0);
            let table = &mut powers[k];
            table.push(ComplexQ::one());
            for e in 1..=top as usize {
                let next = &table[e - 1] * base;
                table.push(next);
            }
        }
        let mut acc = ComplexQ::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, table) in powers.iter().enumerate() {
                let e = m.0[k] as usize;
                if e > 0 {
                    t = &t * &table[e];
                }
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    /// Substitutes `z → s·dir_z`, `w → s·dir_w`; the result is a polynomial in
    /// `s = z` and `s̄ = z̄` (the `w` exponents are zero).
    pub fn restrict_to_line(&self, dir: &(ComplexQ, ComplexQ)) -> Self {
        let (dz, dw) = dir;
        let bases = [dz.clone(), dz.conj(), dw.clone(), dw.conj()];
        WirtingerPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut k = c.clone();
            for (base, e) in bases.iter().zip(m.0) {
                for _ in 0..e {
                    k = &k * base;
                }
            }
            let [a, b, cz, d] = m.0;
            (Monomial([a + cz, b + d, 0, 0]), k)
        }))
    }

    /// Floating-point form for hot evaluation loops.
    pub fn to_numeric(&self) -> NumericPoly {
        NumericPoly {
            terms: self.terms.iter().map(|(m, c)| (m.0, c.to_f64())).collect(),
        }
    }
}

impl Add for &WirtingerPoly {
    type Output = WirtingerPoly;
    fn add(self, rhs: &WirtingerPoly) -> WirtingerPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &WirtingerPoly {
    type Output = WirtingerPoly;
    fn sub(self, rhs: &WirtingerPoly) -> WirtingerPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &WirtingerPoly {
    type Output = WirtingerPoly;
    fn mul(self, rhs: &WirtingerPoly) -> WirtingerPoly {
        let mut out = WirtingerPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &WirtingerPoly {
    type Output = WirtingerPoly;
    fn neg(self) -> WirtingerPoly {
        self.scale_int(-1)
    }
}

impl fmt::Display for WirtingerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let real_only = c.im.is_zero();
            let negative = real_only && c.re.is_negative();
            if i > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let mag = if negative { -c } else { c.clone() };
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one_real() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl ComplexQ {
    fn is_one_real(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

/// Floating-point copy of a [`WirtingerPoly`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NumericPoly {
    terms: Vec<([u32; 4], Complex64)>,
}

impl NumericPoly {
    pub fn eval(&self, q: PointC2) -> Complex64 {
        let bases = [q.z, q.z.conj(), q.w, q.w.conj()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (base, k) in bases.iter().zip(e) {
                if *k > 0 {
                    t *= base.powu(*k);
                }
            }
            acc += t;
        }
        acc
    }
}

/// 2×2 matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix2 {
    pub entries: [[WirtingerPoly; 2]; 2],
}

impl PolyMatrix2 {
    pub fn get(&self, row: usize, col: usize) -> &WirtingerPoly {
        &self.entries[row][col]
    }

    pub fn det(&self) -> WirtingerPoly {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn mul_vec(&self, v: &[WirtingerPoly; 2]) -> [WirtingerPoly; 2] {
        let row = |r: &[WirtingerPoly; 2]| &(&r[0] * &v[0]) + &(&r[1] * &v[1]);
        [row(&self.entries[0]), row(&self.entries[1])]
    }

    pub fn eval(&self, q: PointC2) -> [[Complex64; 2]; 2] {
        let e = &self.entries;
        [
            [e[0][0].eval(q), e[0][1].eval(q)],
            [e[1][0].eval(q), e[1][1].eval(q)],
        ]
    }

    pub fn to_numeric(&self) -> [[NumericPoly; 2]; 2] {
        let e = &self.entries;
        [
            [e[0][0].to_numeric(), e[0][1].to_numeric()],
            [e[1][0].to_numeric(), e[1][1].to_numeric()],
        ]
    }
}

/// `∂²P/∂a∂b`.
fn second(p: &WirtingerPoly, a: Var, b: Var) -> WirtingerPoly {
    p.diff(a).diff(b)
}

/// Complex Hessian (Levi matrix) `[[P_zz̄, P_wz̄], [P_zw̄, P_ww̄]]`.
pub fn complex_hessian(p: &WirtingerPoly) -> Result<PolyMatrix2> {
    if !p.is_real() {
        return Err(Error::NotReal);
    }
    Ok(PolyMatrix2 {
        entries: [
            [second(p, Var::Z, Var::ZBar), second(p, Var::W, Var::ZBar)],
            [second(p, Var::Z, Var::WBar), second(p, Var::W, Var::WBar)],
        ],
    })
}

pub fn levi_determinant(p: &WirtingerPoly) -> Result<WirtingerPoly> {
    Ok(complex_hessian(p)?.det())
}

/// Both components of `H_P(s·dir)·dir` as polynomials in `s, s̄` (stored as `z, z̄`).
pub fn line_hessian_restriction(p: &WirtingerPoly, dir: PointC2) -> Result<[WirtingerPoly; 2]> {
    if dir.norm_sqr() == 0.0 {
        return Err(Error::InvalidConfig(
            "line direction must be nonzero".into(),
        ));
    }
    let h = complex_hessian(p)?;
    let dz = ComplexQ::from_f64(dir.z).ok_or(Error::NonFinite)?;
    let dw = ComplexQ::from_f64(dir.w).ok_or(Error::NonFinite)?;
    let line = (dz.clone(), dw.clone());
    let row = |r: &[WirtingerPoly; 2]| {
        &r[0].restrict_to_line(&line).scale(&dz) + &r[1].restrict_to_line(&line).scale(&dw)
    };
    Ok([row(&h.entries[0]), row(&h.entries[1])])
}

/// Whether `P` is harmonic along the complex line through `0` and `x` (exact).
pub fn is_on_harmonic_line(p: &WirtingerPoly, x: PointC2) -> Result<bool> {
    let [a, b] = line_hessian_restriction(p, x)?;
    Ok(a.is_zero() && b.is_zero())
}

/// Sampled plurisubharmonicity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PshCheck {
    pub pass: bool,
    /// Smallest Hessian eigenvalue seen over all samples.
    pub worst_eigenvalue: f64,
}

/// Smallest eigenvalue of the Hermitian matrix `[[a, b], [conj(b), d]]`.
pub(crate) fn hermitian_min_eigenvalue(a: f64, b: Complex64, d: f64) -> f64 {
    0.5 * (a + d) - math::hypot(0.5 * (a - d), b.norm())
}

pub fn psh_sample_check(p: &WirtingerPoly, samples: &[PointC2], tol: f64) -> Result<PshCheck> {
    let h = complex_hessian(p)?.to_numeric();
    let mut worst = f64::INFINITY;
    for &q in samples {
        let a = h[0][0].eval(q).re;
        let b = h[0][1].eval(q);
        let d = h[1][1].eval(q).re;
        worst = worst.min(hermitian_min_eigenvalue(a, b, d));
    }
    Ok(PshCheck {
        pass: worst >= -tol,
        worst_eigenvalue: worst,
    })
}
