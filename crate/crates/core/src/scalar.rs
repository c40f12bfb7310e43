//! Exact scalars: rationals, Gaussian rationals and rational quaternions.
//!
//! Quaternions use the basis `1, j, k, l` with `jk = l` and are multiplied
//! through the embedding `a + b k -> [[a, b], [-conj(b), conj(a)]]` where
//! `a = c1 + cj i` and `b = ck + cl i`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `n` or `n/d` with an optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Scalars over which the linear algebra layer row reduces.
pub trait Field:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Zero + One
{
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
}

impl Field for Rational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Complex number with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }
    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }
    pub fn from_int(n: i64) -> Self {
        Gaussian::real(rat(n))
    }
    pub fn i() -> Self {
        Gaussian { re: Rational::zero(), im: Rational::one() }
    }
    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn scale(&self, r: &Rational) -> Self {
        Gaussian { re: &self.re * r, im: &self.im * r }
    }
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational `a`, `b`.
    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        if !s.ends_with('i') {
            return parse_rational(&s).map(Gaussian::real);
        }
        let body = &s[..s.len() - 1];
        // Split at the last sign that is not the leading one.
        let split = body.char_indices().filter(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k).next_back();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (Rational::zero(), body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Some(Gaussian { re, im })
    }
}

impl Zero for Gaussian {
    fn zero() -> Self {
        Gaussian::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gaussian {
    fn one() -> Self {
        Gaussian::from_int(1)
    }
}

impl Field for Gaussian {
    fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero");
        Gaussian { re: &self.re / &n, im: -(&self.im / &n) }
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, o: Gaussian) -> Gaussian {
        Gaussian { re: self.re + o.re, im: self.im + o.im }
    }
}
impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, o: Gaussian) -> Gaussian {
        Gaussian { re: self.re - o.re, im: self.im - o.im }
    }
}
impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, o: Gaussian) -> Gaussian {
        &self * &o
    }
}
impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}
impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re, im: -self.im }
    }
}
impl AddAssign for Gaussian {
    fn add_assign(&mut self, o: Gaussian) {
        self.re += o.re;
        self.im += o.im;
    }
}
impl SubAssign for Gaussian {
    fn sub_assign(&mut self, o: Gaussian) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &Rational| -> String {
            if im.is_one() {
                "i".into()
            } else if (-im).is_one() {
                "-i".into()
            } else {
                format!("{im}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}{}", self.re, im_part(&self.im))
                } else {
                    write!(f, "{}+{}", self.re, im_part(&self.im))
                }
            }
        }
    }
}

/// 2x2 matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2Gaussian(pub [[Gaussian; 2]; 2]);

impl Mat2Gaussian {
    pub fn mul(&self, o: &Mat2Gaussian) -> Mat2Gaussian {
        let e = |r: usize, c: usize| &self.0[r][0] * &o.0[0][c] + &self.0[r][1] * &o.0[1][c];
        Mat2Gaussian([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Quaternion `c1 + cj j + ck k + cl l` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Quaternion {
    pub c1: Rational,
    pub cj: Rational,
    pub ck: Rational,
    pub cl: Rational,
}

impl Quaternion {
    pub fn new(c1: Rational, cj: Rational, ck: Rational, cl: Rational) -> Self {
        Quaternion { c1, cj, ck, cl }
    }
    pub fn from_ints(c: [i64; 4]) -> Self {
        Quaternion::new(rat(c[0]), rat(c[1]), rat(c[2]), rat(c[3]))
    }
    /// Basis element by index in `1, j, k, l`.
    pub fn unit(idx: usize) -> Self {
        let mut c = [0; 4];
        c[idx] = 1;
        Quaternion::from_ints(c)
    }
    pub fn coords(&self) -> [Rational; 4] {
        [self.c1.clone(), self.cj.clone(), self.ck.clone(), self.cl.clone()]
    }
    pub fn from_coords(c: &[Rational]) -> Self {
        Quaternion::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
    }
    /// The pair `(a, b)` with `q = a + b k`, `a, b` in `Q(j)` written as Gaussians.
    pub fn halves(&self) -> (Gaussian, Gaussian) {
        (Gaussian::new(self.c1.clone(), self.cj.clone()), Gaussian::new(self.ck.clone(), self.cl.clone()))
    }
    pub fn from_halves(a: &Gaussian, b: &Gaussian) -> Self {
        Quaternion::new(a.re.clone(), a.im.clone(), b.re.clone(), b.im.clone())
    }
    pub fn embed(&self) -> Mat2Gaussian {
        let (a, b) = self.halves();
        Mat2Gaussian([[a.clone(), b.clone()], [-b.conj(), a.conj()]])
    }
    /// Inverse of `embed` on its image.
    pub fn from_embedding(m: &Mat2Gaussian) -> Self {
        Quaternion::from_halves(&m.0[0][0], &m.0[0][1])
    }
    pub fn conj(&self) -> Self {
        Quaternion::new(self.c1.clone(), -self.cj.clone(), -self.ck.clone(), -self.cl.clone())
    }
    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.cj.is_zero() && self.ck.is_zero() && self.cl.is_zero()
    }
    pub fn scale(&self, r: &Rational) -> Self {
        Quaternion::new(&self.c1 * r, &self.cj * r, &self.ck * r, &self.cl * r)
    }
    pub fn norm_sq(&self) -> Rational {
        &self.c1 * &self.c1 + &self.cj * &self.cj + &self.ck * &self.ck + &self.cl * &self.cl
    }
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero quaternion");
        self.conj().scale(&n.recip())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.c1 + o.c1, self.cj + o.cj, self.ck + o.ck, self.cl + o.cl)
    }
}
impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.c1 - o.c1, self.cj - o.cj, self.ck - o.ck, self.cl - o.cl)
    }
}
impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.c1, -self.cj, -self.ck, -self.cl)
    }
}
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        &self * &o
    }
}
impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        Quaternion::from_embedding(&self.embed().mul(&o.embed()))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c1)?;
        for (c, u) in [(&self.cj, "j"), (&self.ck, "k"), (&self.cl, "l")] {
            if c.is_negative() {
                write!(f, "{c}{u}")?;
            } else {
                write!(f, "+{c}{u}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: [i64; 4]) -> Quaternion {
        Quaternion::from_ints(c)
    }

    #[test]
    fn unit_products() {
        let (one, j, k, l) = (q([1, 0, 0, 0]), q([0, 1, 0, 0]), q([0, 0, 1, 0]), q([0, 0, 0, 1]));
        let m1 = -one.clone();
        assert_eq!(&j * &j, m1);
        assert_eq!(&k * &k, m1);
        assert_eq!(&l * &l, m1);
        assert_eq!(&j * &k, l);
        assert_eq!(&k * &l, j);
        assert_eq!(&l * &j, k);
        assert_eq!(&k * &j, -l.clone());
        assert_eq!(&one * &l, l);
    }

    #[test]
    fn inverse_and_norm() {
        let x = q([1, 2, -3, 4]);
        assert_eq!(&x * &x.inv(), q([1, 0, 0, 0]));
        let g = Gaussian::new(ratio(1, 2), rat(-3));
        assert_eq!(&g * &g.inv(), Gaussian::one());
    }

    #[test]
    fn gaussian_display_and_parse() {
        let cases = [
            (Gaussian::new(rat(1), rat(2)), "1+2i"),
            (Gaussian::new(rat(1), rat(-1)), "1-i"),
            (Gaussian::new(rat(0), rat(1)), "i"),
            (Gaussian::new(rat(0), rat(-1)), "-i"),
            (Gaussian::new(rat(0), ratio(1, 2)), "1/2i"),
            (Gaussian::new(ratio(-3, 4), rat(0)), "-3/4"),
            (Gaussian::zero(), "0"),
        ];
        for (g, s) in cases {
            assert_eq!(g.to_string(), s);
            assert_eq!(Gaussian::parse(s), Some(g));
        }
        assert_eq!(Gaussian::parse("-1/2-3/5i"), Some(Gaussian::new(ratio(-1, 2), ratio(-3, 5))));
        assert_eq!(Gaussian::parse("x"), None);
    }

    #[test]
    fn quaternion_display() {
        assert_eq!(q([1, -1, 0, 2]).to_string(), "1-1j+0k+2l");
    }
}
