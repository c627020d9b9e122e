//! Exact scalars: rationals and the Gaussian rationals ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Minimal field interface used by the generic linear algebra kernels.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero_el() -> Self;
    fn one_el() -> Self;
    fn is_zero_el(&self) -> bool;
    fn add_el(&self, o: &Self) -> Self;
    fn sub_el(&self, o: &Self) -> Self;
    fn mul_el(&self, o: &Self) -> Self;
    fn neg_el(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv_el(&self) -> Option<Self>;
}

impl Field for Rat {
    fn zero_el() -> Self {
        Zero::zero()
    }
    fn one_el() -> Self {
        One::one()
    }
    fn is_zero_el(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_el(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_el(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_el(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_el(&self) -> Self {
        -self
    }
    fn inv_el(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Qi {
    pub re: Rat,
    pub im: Rat,
}

impl Qi {
    pub fn new(re: Rat, im: Rat) -> Self {
        Qi { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Qi { re, im: <Rat as Zero>::zero() }
    }

    pub fn int(n: i64) -> Self {
        Qi::real(rat(n))
    }

    pub fn i() -> Self {
        Qi::new(<Rat as Zero>::zero(), <Rat as One>::one())
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Qi::int(1),
            1 => Qi::i(),
            2 => Qi::int(-1),
            _ => -Qi::i(),
        }
    }

    pub fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }

    pub fn recip(&self) -> Option<Self> {
        let n = self.norm_sq();
        if Zero::is_zero(&n) {
            return None;
        }
        Some(Qi::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Qi::new(&self.re * r, &self.im * r)
    }
}

impl From<Rat> for Qi {
    fn from(r: Rat) -> Self {
        Qi::real(r)
    }
}

impl From<i64> for Qi {
    fn from(n: i64) -> Self {
        Qi::int(n)
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.re), Zero::is_zero(&self.im)) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl<'a> Add<&'a Qi> for &'a Qi {
    type Output = Qi;
    fn add(self, o: &Qi) -> Qi {
        Qi::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Qi> for &'a Qi {
    type Output = Qi;
    fn sub(self, o: &Qi) -> Qi {
        Qi::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Qi> for &'a Qi {
    type Output = Qi;
    fn mul(self, o: &Qi) -> Qi {
        Qi::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, o: Qi) -> Qi {
        &self + &o
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, o: Qi) -> Qi {
        &self - &o
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, o: Qi) -> Qi {
        &self * &o
    }
}

impl Div for Qi {
    type Output = Qi;
    fn div(self, o: Qi) -> Qi {
        &self * &o.recip().expect("division by zero in Q(i)")
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re, -self.im)
    }
}

impl Neg for &Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Qi> for Qi {
    fn add_assign(&mut self, o: &Qi) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Qi> for Qi {
    fn sub_assign(&mut self, o: &Qi) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Qi> for Qi {
    fn mul_assign(&mut self, o: &Qi) {
        *self = &*self * o;
    }
}

impl Field for Qi {
    fn zero_el() -> Self {
        Qi::default()
    }
    fn one_el() -> Self {
        Qi::int(1)
    }
    fn is_zero_el(&self) -> bool {
        Qi::is_zero(self)
    }
    fn add_el(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_el(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_el(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_el(&self) -> Self {
        -self
    }
    fn inv_el(&self) -> Option<Self> {
        self.recip()
    }
}
