//! Resultants of polynomials in `λ` whose coefficients lie in `Q[s]`.
//!
//! The working algorithm is the subresultant PRS; the Sylvester determinant
//! (fraction-free Bareiss elimination) is kept as an independent check.

use super::unipoly::UniPoly;

/// A polynomial in `λ` with coefficients in `Q[s]`, ascending in `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    c: Vec<UniPoly>,
}

impl LambdaPoly {
    pub fn new(mut c: Vec<UniPoly>) -> Self {
        while c.last().is_some_and(UniPoly::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> UniPoly {
        self.c.get(k).cloned().unwrap_or_else(UniPoly::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> UniPoly {
        self.c.last().cloned().unwrap_or_else(UniPoly::zero)
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    fn scale(&self, k: &UniPoly) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(k)).collect())
    }

    fn shift_mul(&self, k: &UniPoly, by: usize) -> Self {
        let mut c = vec![UniPoly::zero(); by];
        c.extend(self.c.iter().map(|x| x.mul(k)));
        Self::new(c)
    }

    fn exact_div_scalar(&self, k: &UniPoly) -> Option<Self> {
        self.c
            .iter()
            .map(|x| x.exact_div(k))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    /// Specializes `s`.
    pub fn at_s(&self, s: &num_rational::BigRational) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x.eval(s)).collect())
    }
}

/// Pseudo-remainder: `lc(b)^(deg a − deg b + 1) · a mod b`.
fn prem(a: &LambdaPoly, b: &LambdaPoly) -> LambdaPoly {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.lead();
    let mut r = a.clone();
    let Some(da) = a.degree() else {
        return r;
    };
    if da < db {
        return r;
    }
    let mut steps = da - db + 1;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let t = r.lead();
        r = r.scale(&lb).sub(&b.shift_mul(&t, dr - db));
        steps -= 1;
    }
    if steps > 0 {
        r = r.scale(&lb.pow(steps));
    }
    r
}

fn odd(n: usize) -> bool {
    n % 2 == 1
}

/// `Res_λ(a, b)` by the subresultant PRS.
pub fn resultant(a: &LambdaPoly, b: &LambdaPoly) -> UniPoly {
    let (Some(_), Some(_)) = (a.degree(), b.degree()) else {
        return UniPoly::zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if odd(a.degree().unwrap()) && odd(b.degree().unwrap()) {
            negate = true;
        }
    }
    if b.degree() == Some(0) {
        let r = b.lead().pow(a.degree().unwrap());
        return if negate { r.neg() } else { r };
    }
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if odd(da) && odd(db) {
            negate = !negate;
        }
        let r = prem(&a, &b);
        a = b;
        let div = g.mul(&h.pow(delta));
        b = r
            .exact_div_scalar(&div)
            .expect("subresultant division is exact");
        g = a.lead();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
        match b.degree() {
            None => return UniPoly::zero(),
            Some(0) => {
                let da = a.degree().unwrap();
                let res = b
                    .lead()
                    .pow(da)
                    .exact_div(&h.pow(da - 1))
                    .expect("subresultant division is exact");
                return if negate { res.neg() } else { res };
            }
            Some(_) => {}
        }
    }
}

/// `Res_λ(a, b)` as the Sylvester determinant (fraction-free elimination).
pub fn sylvester_resultant(a: &LambdaPoly, b: &LambdaPoly) -> UniPoly {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return UniPoly::zero();
    };
    let size = m + n;
    if size == 0 {
        return UniPoly::one();
    }
    // Rows hold coefficients from the leading term down.
    let mut rows: Vec<Vec<UniPoly>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![UniPoly::zero(); size];
        for k in 0..=m {
            row[i + k] = a.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![UniPoly::zero(); size];
        for k in 0..=n {
            row[i + k] = b.coeff(n - k);
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return UniPoly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    if sign {
        prev.neg()
    } else {
        prev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[&[i64]]) -> LambdaPoly {
        LambdaPoly::new(c.iter().map(|x| UniPoly::from_ints(x)).collect())
    }

    #[test]
    fn agrees_with_sylvester() {
        // λ^2 − s and λ − s^2 + 1: resultant (s^2 − 1)^2 − s.
        let a = lp(&[&[0, -1], &[], &[1]]);
        let b = lp(&[&[1, 0, -1], &[1]]);
        let want = UniPoly::from_ints(&[1, -1, -2, 0, 1]);
        assert_eq!(sylvester_resultant(&a, &b), want);
        assert_eq!(resultant(&a, &b), want);
    }

    #[test]
    fn common_root_gives_zero() {
        let a = lp(&[&[-1], &[0], &[1]]);
        let b = lp(&[&[1], &[1]]);
        assert!(resultant(&a, &b).is_zero());
        assert!(sylvester_resultant(&a, &b).is_zero());
    }

    #[test]
    fn swap_sign() {
        let a = lp(&[&[0, 1], &[1]]);
        let b = lp(&[&[2], &[0, 1], &[1]]);
        assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
        assert_eq!(resultant(&b, &a), sylvester_resultant(&b, &a));
    }
}
