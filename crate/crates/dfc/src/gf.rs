//! Exact arithmetic in F_p and F_{p^m}.
//!
//! Elements are enumerated in a fixed canonical order: index 0 is the zero
//! element and index i >= 1 is alpha^(i-1), where alpha is the root of the
//! lexicographically smallest primitive polynomial of degree m over F_p.
//! Multiplication works on exponents; addition goes through Zech logarithms
//! when the table fits (q <= 2^16) and through coefficient vectors otherwise.

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldParams::new`] (3^16).
pub const DEFAULT_Q_BOUND: u64 = 43_046_721;

/// Build Zech logarithm tables up to this order; fall back to digit
/// arithmetic above it.
const ZECH_BOUND: u64 = 1 << 16;

const LOG_NONE: u32 = u32::MAX;
const ZECH_NONE: u32 = u32::MAX;

/// Element of F_{p^m}, identified by its canonical index in {0, .., q-1}.
///
/// Index 0 is the zero element; index i >= 1 denotes alpha^(i-1). The same
/// enumeration order indexes codeword coordinates everywhere in this crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A concrete realization of F_{p^m}: primitive modulus, log/antilog tables,
/// trace table. Immutable after construction and safe to share across
/// threads; all operations are pure.
pub struct FieldParams {
    p: u64,
    m: u32,
    q: u64,
    /// Coefficients of the primitive modulus, low degree first, length m+1, monic.
    modulus: Vec<u64>,
    /// antilog[i] = coefficient encoding of alpha^i, i in 0..q-1.
    antilog: Vec<u32>,
    /// log[enc] = i with antilog[i] = enc; LOG_NONE at the zero encoding.
    log: Vec<u32>,
    /// zech[i] = log(1 + alpha^i), ZECH_NONE where 1 + alpha^i = 0.
    zech: Option<Vec<u32>>,
    /// Trace by canonical element index.
    trace_tab: Vec<u16>,
    /// Exponent of -1, i.e. (q-1)/2.
    half_n: u64,
}

impl FieldParams {
    /// Construct F_{p^m} from the lexicographically smallest primitive
    /// polynomial (coefficients compared low-degree-first). Deterministic
    /// across runs.
    pub fn new(p: u64, m: u32) -> Result<FieldParams> {
        Self::with_bound(p, m, DEFAULT_Q_BOUND)
    }

    /// Same as [`FieldParams::new`] with an explicit order bound.
    pub fn with_bound(p: u64, m: u32, bound: u64) -> Result<FieldParams> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidDegree);
        }
        if p >= 1 << 16 {
            // Trace residues are stored in 16 bits.
            return Err(Error::FieldTooLarge { q: p, bound });
        }
        let q = checked_pow(p, m, bound).ok_or(Error::FieldTooLarge {
            q: u64::MAX,
            bound,
        })?;
        if q > bound {
            return Err(Error::FieldTooLarge { q, bound });
        }

        let modulus = smallest_primitive_poly(p, m, q);
        let n = q - 1;

        // Power table: repeated multiplication by x modulo the modulus.
        let md = m as usize;
        let mut antilog = vec![0u32; n as usize];
        let mut log = vec![LOG_NONE; q as usize];
        let mut digits = vec![0u64; md];
        digits[0] = 1;
        for i in 0..n as usize {
            let enc = encode(&digits, p);
            antilog[i] = enc;
            debug_assert_eq!(log[enc as usize], LOG_NONE, "alpha is not primitive");
            log[enc as usize] = i as u32;
            mul_by_x(&mut digits, &modulus, p);
        }
        assert_eq!(encode(&digits, p), 1, "alpha^(q-1) != 1");

        let zech = if q <= ZECH_BOUND {
            let mut z = vec![ZECH_NONE; n as usize];
            for i in 0..n as usize {
                let enc = antilog[i];
                let d0 = enc % p as u32;
                let s = enc - d0 + (d0 + 1) % p as u32;
                if s != 0 {
                    z[i] = log[s as usize];
                }
            }
            Some(z)
        } else {
            None
        };

        // Traces of the basis monomials x^j, then of every element.
        let mut basis_tr = vec![0u64; md];
        for j in 0..md {
            let mut acc = vec![0u64; md];
            let mut pi = 1u64; // p^i mod n not needed: j*p^i < q*m fits u64
            for _ in 0..m {
                let e = (j as u64 * pi) % n;
                let other = decode(antilog[e as usize], p, md);
                for (t, o) in acc.iter_mut().zip(other) {
                    *t = (*t + o) % p;
                }
                pi *= p;
            }
            assert!(
                acc[1..].iter().all(|&c| c == 0),
                "trace of a basis monomial landed outside F_p"
            );
            basis_tr[j] = acc[0];
        }
        let mut trace_tab = vec![0u16; q as usize];
        for k in 0..n as usize {
            let d = decode(antilog[k], p, md);
            let t = d
                .iter()
                .zip(&basis_tr)
                .fold(0u64, |s, (&c, &bt)| (s + c * bt) % p);
            trace_tab[1 + k] = t as u16;
        }

        Ok(FieldParams {
            p,
            m,
            q,
            modulus,
            antilog,
            log,
            zech,
            trace_tab,
            half_n: n / 2,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, low degree first (length m+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Modulus as a human-readable polynomial in x.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            };
            terms.push(t);
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn alpha(&self) -> FieldElem {
        self.elem_of_exp(1)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::IndexOutOfRange { index, q: self.q })
        }
    }

    /// alpha^e for an arbitrary exponent.
    pub fn elem_of_exp(&self, e: u64) -> FieldElem {
        FieldElem(1 + (e % (self.q - 1)) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    /// Coefficient encoding (base-p digit vector packed into an integer) of x.
    pub fn coeff_encoding(&self, x: FieldElem) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.antilog[(x.0 - 1) as usize]
        }
    }

    /// Inverse of [`FieldParams::coeff_encoding`].
    pub fn from_coeff_encoding(&self, enc: u32) -> FieldElem {
        if enc == 0 {
            FieldElem::ZERO
        } else {
            FieldElem(1 + self.log[enc as usize])
        }
    }

    /// Embed a residue of F_p into the prime subfield.
    pub fn embed_residue(&self, r: u64) -> FieldElem {
        self.from_coeff_encoding((r % self.p) as u32)
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let n = self.q - 1;
        let ex = (x.0 - 1) as u64;
        let ey = (y.0 - 1) as u64;
        if let Some(zech) = &self.zech {
            // x + y = alpha^ex * (1 + alpha^(ey-ex))
            let d = (ey + n - ex) % n;
            match zech[d as usize] {
                ZECH_NONE => FieldElem::ZERO,
                z => self.elem_of_exp(ex + z as u64),
            }
        } else {
            let md = self.m as usize;
            let a = decode(self.antilog[ex as usize], self.p, md);
            let b = decode(self.antilog[ey as usize], self.p, md);
            let mut s = vec![0u64; md];
            for j in 0..md {
                s[j] = (a[j] + b[j]) % self.p;
            }
            self.from_coeff_encoding(encode(&s, self.p))
        }
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        if x.is_zero() {
            x
        } else {
            self.elem_of_exp((x.0 - 1) as u64 + self.half_n)
        }
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.is_zero() || y.is_zero() {
            return FieldElem::ZERO;
        }
        self.elem_of_exp((x.0 - 1) as u64 + (y.0 - 1) as u64)
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(self.elem_of_exp(n - (x.0 - 1) as u64 % n))
    }

    /// x^e with the exponent reduced modulo q-1 on the multiplicative group.
    pub fn pow(&self, x: FieldElem, e: u128) -> FieldElem {
        if x.is_zero() {
            return if e == 0 { self.one() } else { FieldElem::ZERO };
        }
        let n = (self.q - 1) as u128;
        let er = (e % n) as u64;
        self.elem_of_exp(((x.0 - 1) as u128 * er as u128 % n) as u64)
    }

    /// Tr(x) as a residue in {0, .., p-1}.
    pub fn trace(&self, x: FieldElem) -> u64 {
        self.trace_tab[x.0 as usize] as u64
    }

    pub(crate) fn trace_table(&self) -> &[u16] {
        &self.trace_tab
    }

    /// Quadratic character of F_q: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn eta(&self, x: FieldElem) -> i32 {
        if x.is_zero() {
            0
        } else if (x.0 - 1) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Quadratic character of the prime field F_p (Legendre symbol).
    pub fn eta_prime(&self, r: u64) -> i32 {
        legendre(r, self.p)
    }

    /// Solve a^(p^l) x^(p^(2l)) + a x = rhs as an F_p-linear system.
    ///
    /// The map is a permutation or has a kernel of exactly p^2 elements;
    /// anything else trips an assertion.
    pub fn solve_linearized(&self, a: FieldElem, l: u32, rhs: FieldElem) -> Result<LinearizedSolution> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if gcd(self.m as u64, l as u64) != 1 {
            return Err(Error::GcdViolation { m: self.m, l });
        }
        let md = self.m as usize;
        let pl = pow_u128(self.p as u128, l);
        let a_pl = self.pow(a, pl);
        let p2l = pl * pl;

        // Columns are images of the polynomial basis {1, x, .., x^(m-1)}.
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(md);
        for j in 0..md {
            let bj = self.from_coeff_encoding(pow_u64(self.p, j as u32) as u32);
            let img = self.add(self.mul(a_pl, self.pow(bj, p2l)), self.mul(a, bj));
            cols.push(decode(self.coeff_encoding(img), self.p, md));
        }
        let rhs_digits = decode(self.coeff_encoding(rhs), self.p, md);

        let (particular, kernel_dim) = solve_fp_system(&cols, &rhs_digits, self.p, md);
        assert!(
            kernel_dim == 0 || kernel_dim == 2,
            "linearized map kernel has dimension {kernel_dim}"
        );
        let particular = particular.map(|d| self.from_coeff_encoding(encode(&d, self.p)));
        Ok(LinearizedSolution {
            particular,
            kernel_dim,
        })
    }
}

/// Outcome of [`FieldParams::solve_linearized`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearizedSolution {
    /// A solution, or `None` when the system is inconsistent.
    pub particular: Option<FieldElem>,
    /// Dimension of the kernel over F_p (0 or 2).
    pub kernel_dim: u32,
}

impl LinearizedSolution {
    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.kernel_dim == 0
    }

    /// Number of solutions: 0, 1, or p^2.
    pub fn solution_count(&self, p: u64) -> u64 {
        match self.particular {
            None => 0,
            Some(_) => pow_u64(p, self.kernel_dim),
        }
    }
}

/// Legendre symbol of r modulo an odd prime p, via Euler's criterion.
pub fn legendre(r: u64, p: u64) -> i32 {
    let r = r % p;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_u64(base: u64, e: u32) -> u64 {
    base.pow(e)
}

fn pow_u128(base: u128, e: u32) -> u128 {
    base.pow(e)
}

fn checked_pow(p: u64, m: u32, bound: u64) -> Option<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p)?;
        if q > bound {
            return None;
        }
    }
    Some(q)
}

fn pow_mod(base: u64, mut e: u64, modulus: u64) -> u64 {
    let mut b = base as u128 % modulus as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % modulus as u128;
        }
        b = b * b % modulus as u128;
        e >>= 1;
    }
    acc as u64
}

fn encode(digits: &[u64], p: u64) -> u32 {
    let mut enc: u64 = 0;
    for &d in digits.iter().rev() {
        enc = enc * p + d;
    }
    enc as u32
}

fn decode(enc: u32, p: u64, m: usize) -> Vec<u64> {
    let mut e = enc as u64;
    let mut out = vec![0u64; m];
    for d in out.iter_mut() {
        *d = e % p;
        e /= p;
    }
    out
}

/// Multiply the coefficient vector by x modulo the monic `modulus`.
fn mul_by_x(digits: &mut [u64], modulus: &[u64], p: u64) {
    let m = digits.len();
    let carry = digits[m - 1];
    for j in (1..m).rev() {
        digits[j] = digits[j - 1];
    }
    digits[0] = 0;
    if carry != 0 {
        for j in 0..m {
            digits[j] = (digits[j] + (p - modulus[j] % p) % p * carry) % p;
        }
    }
}

/// Lexicographically smallest primitive monic polynomial of degree m,
/// coefficients compared low-degree-first.
fn smallest_primitive_poly(p: u64, m: u32, q: u64) -> Vec<u64> {
    let n = q - 1;
    let factors = prime_factors(n);
    let md = m as usize;
    let total = pow_u64(p, m);
    for k in 0..total {
        // c_0 is the most significant digit of k so that ascending k
        // enumerates (c_0, .., c_{m-1}) in lexicographic order.
        let mut coeffs = vec![0u64; md + 1];
        coeffs[md] = 1;
        let mut rem = k;
        for j in (0..md).rev() {
            coeffs[md - 1 - j] = rem / pow_u64(p, j as u32);
            rem %= pow_u64(p, j as u32);
        }
        if coeffs[0] == 0 {
            continue; // x divides the candidate
        }
        if is_primitive(&coeffs, p, m, n, &factors) {
            return coeffs;
        }
    }
    unreachable!("every field has a primitive polynomial");
}

/// A monic degree-m polynomial is primitive iff the class of x has
/// multiplicative order exactly q-1 in F_p[x]/(f).
fn is_primitive(f: &[u64], p: u64, m: u32, n: u64, factors: &[u64]) -> bool {
    let x = if m == 1 {
        vec![(p - f[0] % p) % p]
    } else {
        let mut v = vec![0u64; m as usize];
        v[1] = 1;
        v
    };
    if !poly_is_one(&poly_pow_mod(&x, n, f, p)) {
        return false;
    }
    for &r in factors {
        if poly_is_one(&poly_pow_mod(&x, n / r, f, p)) {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn poly_is_one(a: &[u64]) -> bool {
    !a.is_empty() && a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce modulo the monic f.
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for j in 0..m {
            prod[d - m + j] = (prod[d - m + j] + (p - f[j] % p) % p * c) % p;
        }
    }
    prod.truncate(m.max(1));
    prod
}

fn poly_pow_mod(x: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let m = (f.len() - 1).max(1);
    let mut base = x.to_vec();
    base.resize(m, 0);
    let mut acc = vec![0u64; m];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, f, p);
        }
        base = poly_mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// Solve `cols * xi = rhs` over F_p; returns a particular solution (free
/// variables set to zero) and the kernel dimension.
fn solve_fp_system(
    cols: &[Vec<u64>],
    rhs: &[u64],
    p: u64,
    m: usize,
) -> (Option<Vec<u64>>, u32) {
    // Augmented matrix, row-major.
    let w = m + 1;
    let mut mat = vec![0u64; m * w];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..m {
            mat[i * w + j] = col[i];
        }
    }
    for i in 0..m {
        mat[i * w + m] = rhs[i];
    }

    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..m {
        let Some(pr) = (row..m).find(|&r| mat[r * w + col] != 0) else {
            continue;
        };
        for j in 0..w {
            mat.swap(row * w + j, pr * w + j);
        }
        let inv = pow_mod(mat[row * w + col], p - 2, p);
        for j in col..w {
            mat[row * w + j] = mat[row * w + j] * inv % p;
        }
        for r in 0..m {
            if r != row && mat[r * w + col] != 0 {
                let factor = mat[r * w + col];
                for j in col..w {
                    let sub = factor * mat[row * w + j] % p;
                    mat[r * w + j] = (mat[r * w + j] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let rank = row;
    let consistent = (rank..m).all(|r| mat[r * w + m] == 0);
    if !consistent {
        return (None, (m - rank) as u32);
    }
    let mut sol = vec![0u64; m];
    for (r, &c) in pivot_cols.iter().enumerate() {
        sol[c] = mat[r * w + m];
    }
    (Some(sol), (m - rank) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook polynomial field, used as an independent oracle for the
    /// table-driven implementation.
    struct NaiveField {
        p: u64,
        m: usize,
        modulus: Vec<u64>,
    }

    impl NaiveField {
        fn of(f: &FieldParams) -> NaiveField {
            NaiveField {
                p: f.p(),
                m: f.m() as usize,
                modulus: f.modulus().to_vec(),
            }
        }

        fn coeffs(&self, f: &FieldParams, x: FieldElem) -> Vec<u64> {
            decode(f.coeff_encoding(x), self.p, self.m)
        }

        fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
            a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
        }

        fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
            poly_mul_mod(a, b, &self.modulus, self.p)
        }

        fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
            let mut acc = vec![0u64; self.m];
            acc[0] = 1;
            let mut base = a.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(&acc, &base);
                }
                base = self.mul(&base, &base);
                e >>= 1;
            }
            acc
        }

        fn trace(&self, a: &[u64]) -> u64 {
            let mut acc = vec![0u64; self.m];
            let mut e: u128 = 1;
            for _ in 0..self.m {
                acc = self.add(&acc, &self.pow(a, e));
                e *= self.p as u128;
            }
            assert!(acc[1..].iter().all(|&c| c == 0));
            acc[0]
        }
    }

    #[test]
    fn smallest_primitive_modulus_for_f3() {
        let f = FieldParams::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 1]); // x + 1, with root 2 generating F_3^*
        assert_eq!(f.coeff_encoding(f.alpha()), 2);
    }

    #[test]
    fn alpha_order_examples() {
        let f = FieldParams::new(3, 3).unwrap();
        assert_eq!(f.q(), 27);
        assert_eq!(f.pow(f.alpha(), 26), f.one());
        assert_ne!(f.pow(f.alpha(), 13), f.one());

        let f = FieldParams::new(5, 3).unwrap();
        assert_eq!(f.q(), 125);
        assert_eq!(f.pow(f.alpha(), 124), f.one());
        assert_ne!(f.pow(f.alpha(), 62), f.one());
        assert_ne!(f.pow(f.alpha(), 4), f.one());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldParams::new(2, 4), Err(Error::InvalidPrime(2))));
        assert!(matches!(FieldParams::new(9, 2), Err(Error::InvalidPrime(9))));
        assert!(matches!(FieldParams::new(3, 0), Err(Error::InvalidDegree)));
        assert!(matches!(
            FieldParams::with_bound(3, 17, DEFAULT_Q_BOUND),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 1)] {
            let f = FieldParams::new(p, m).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                    assert_eq!(f.pow(x, (f.q() - 1) as u128), f.one());
                }
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                }
            }
            assert!(f.inv(f.zero()).is_err());
        }
    }

    #[test]
    fn matches_naive_polynomial_arithmetic() {
        for (p, m) in [(3, 3), (5, 2), (7, 2)] {
            let f = FieldParams::new(p, m).unwrap();
            let nf = NaiveField::of(&f);
            for x in f.elements() {
                let cx = nf.coeffs(&f, x);
                assert_eq!(f.trace(x), nf.trace(&cx), "trace mismatch at {x:?}");
                for y in f.elements() {
                    let cy = nf.coeffs(&f, y);
                    assert_eq!(
                        nf.coeffs(&f, f.add(x, y)),
                        nf.add(&cx, &cy),
                        "add mismatch at {x:?}, {y:?}"
                    );
                    assert_eq!(
                        nf.coeffs(&f, f.mul(x, y)),
                        nf.mul(&cx, &cy),
                        "mul mismatch at {x:?}, {y:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn digit_addition_path_matches_zech_path() {
        // Same field, with and without the Zech table.
        let with = FieldParams::new(3, 4).unwrap();
        let mut without = FieldParams::new(3, 4).unwrap();
        without.zech = None;
        for x in with.elements() {
            for y in with.elements() {
                assert_eq!(with.add(x, y), without.add(x, y));
            }
        }
    }

    #[test]
    fn trace_examples_and_fiber_balance() {
        let f = FieldParams::new(3, 3).unwrap();
        assert_eq!(f.trace(f.zero()), 0);
        assert_eq!(f.trace(f.one()), 0); // Tr(1) = m mod p = 0
        for (p, m) in [(3, 3), (3, 4), (5, 3), (7, 3), (3, 10)] {
            let f = FieldParams::new(p, m).unwrap();
            let mut fibers = vec![0u64; p as usize];
            for x in f.elements() {
                fibers[f.trace(x) as usize] += 1;
            }
            let expect = f.q() / p;
            assert!(fibers.iter().all(|&c| c == expect), "({p},{m}): {fibers:?}");
        }
    }

    #[test]
    fn trace_is_additive_and_fp_linear() {
        let f = FieldParams::new(5, 3).unwrap();
        for x in f.elements().step_by(7) {
            for y in f.elements().step_by(11) {
                assert_eq!(
                    f.trace(f.add(x, y)),
                    (f.trace(x) + f.trace(y)) % f.p()
                );
            }
        }
    }

    #[test]
    fn eta_balance_and_squares() {
        for (p, m) in [(3, 3), (3, 4), (5, 3), (7, 3)] {
            let f = FieldParams::new(p, m).unwrap();
            assert_eq!(f.eta(f.zero()), 0);
            let (mut plus, mut minus) = (0u64, 0u64);
            for x in f.elements().skip(1) {
                assert_eq!(f.eta(f.mul(x, x)), 1);
                match f.eta(x) {
                    1 => plus += 1,
                    -1 => minus += 1,
                    _ => unreachable!(),
                }
            }
            assert_eq!(plus, (f.q() - 1) / 2);
            assert_eq!(minus, (f.q() - 1) / 2);
        }
    }

    #[test]
    fn eta_restricted_to_prime_field() {
        // eta(y) = 1 for nonzero y in F_p when m is even, eta'(y) when odd.
        for (p, m) in [(3, 2), (3, 4), (5, 2)] {
            let f = FieldParams::new(p, m).unwrap();
            for y in 1..p {
                assert_eq!(f.eta(f.embed_residue(y)), 1, "({p},{m}) y={y}");
            }
        }
        for (p, m) in [(3, 3), (5, 3), (7, 3)] {
            let f = FieldParams::new(p, m).unwrap();
            for y in 1..p {
                assert_eq!(f.eta(f.embed_residue(y)), f.eta_prime(y));
            }
        }
    }

    #[test]
    fn legendre_small_values() {
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(2, 7), 1); // 3^2 = 2 mod 7
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(4, 5), 1);
    }

    fn brute_force_solutions(
        f: &FieldParams,
        a: FieldElem,
        l: u32,
        rhs: FieldElem,
    ) -> Vec<FieldElem> {
        let pl = (f.p() as u128).pow(l);
        let a_pl = f.pow(a, pl);
        f.elements()
            .filter(|&x| f.add(f.mul(a_pl, f.pow(x, pl * pl)), f.mul(a, x)) == rhs)
            .collect()
    }

    #[test]
    fn solve_linearized_matches_brute_force() {
        for (p, m, l) in [(3, 3, 1), (3, 3, 2), (5, 3, 1), (3, 4, 1)] {
            let f = FieldParams::new(p, m).unwrap();
            for a in f.elements().skip(1) {
                for rhs in f.elements() {
                    let sol = f.solve_linearized(a, l, rhs).unwrap();
                    let brute = brute_force_solutions(&f, a, l, rhs);
                    assert_eq!(
                        sol.solution_count(p) as usize,
                        brute.len(),
                        "({p},{m},{l}) a={a:?} rhs={rhs:?}"
                    );
                    if let Some(x) = sol.particular {
                        assert!(brute.contains(&x));
                    }
                    if m % 2 == 1 {
                        assert!(sol.is_unique(), "odd m must give a permutation");
                    }
                }
            }
        }
    }

    #[test]
    fn solve_linearized_kernel_dichotomy_even_m() {
        // Kernel is p^2 exactly when a^((q-1)/(p+1)) = (-1)^(m/2), else trivial.
        let f = FieldParams::new(3, 4).unwrap();
        let crit_exp = ((f.q() - 1) / (f.p() + 1)) as u128;
        let target = f.one(); // (-1)^2 = 1
        for a in f.elements().skip(1) {
            let sol = f.solve_linearized(a, 1, f.zero()).unwrap();
            if f.pow(a, crit_exp) == target {
                assert_eq!(sol.kernel_dim, 2, "a={a:?}");
                assert_eq!(sol.solution_count(3), 9);
            } else {
                assert!(sol.is_unique(), "a={a:?}");
            }
        }
    }

    #[test]
    fn solve_linearized_rejects_bad_input() {
        let f = FieldParams::new(3, 3).unwrap();
        assert!(matches!(
            f.solve_linearized(f.zero(), 1, f.one()),
            Err(Error::ZeroArgument)
        ));
        assert!(matches!(
            f.solve_linearized(f.one(), 3, f.one()),
            Err(Error::GcdViolation { .. })
        ));
    }
}
