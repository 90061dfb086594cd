//! Prime fields, number-theoretic transforms and CRT reconstruction.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic modulo a prime below 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub fn reduce(self, x: &BigUint) -> u64 {
        (x % self.p).to_u64().expect("residue fits in a word")
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One prime of the basis together with its roots of unity.
#[derive(Debug, Clone)]
pub struct BasisPrime {
    pub field: PrimeField,
    /// Root of exact order `cyclic_len`.
    pub cyclic_root: u64,
    /// Root of exact order `2^log2`.
    pub pow2_root: u64,
}

/// Primes `p = c * cyclic_len * 2^log2 + 1` below 2^62 with matching roots of
/// unity; their product exceeds `2^min_bits`.
#[derive(Debug, Clone)]
pub struct PrimeBasis {
    pub cyclic_len: usize,
    pub log2: u32,
    pub primes: Vec<BasisPrime>,
    /// Inverse of `p_0 * ... * p_{i-1}` modulo `p_i`.
    garner: Vec<u64>,
}

const PRIME_LIMIT: u64 = 1 << 62;

impl PrimeBasis {
    pub fn new(cyclic_len: usize, log2: u32, min_bits: usize) -> Result<PrimeBasis> {
        if cyclic_len == 0 {
            return Err(Error::Precondition("cyclic length must be positive".into()));
        }
        let order = (cyclic_len as u128) << log2;
        if order >= PRIME_LIMIT as u128 >> 8 {
            return Err(Error::Budget(format!(
                "no word-size primes for transform order {cyclic_len}*2^{log2}"
            )));
        }
        let order = order as u64;
        let mut factors = prime_factors(cyclic_len as u64);
        if log2 > 0 && !factors.contains(&2) {
            factors.push(2);
        }
        let mut primes = Vec::new();
        let mut bits = 0.0f64;
        let mut c = (PRIME_LIMIT - 1) / order;
        while (primes.len() < 2 || bits <= min_bits as f64) && c > 0 {
            let p = c * order + 1;
            c -= 1;
            if !is_prime(p) {
                continue;
            }
            let field = PrimeField { p };
            let root = (2..)
                .map(|x| field.pow(x, (p - 1) / order))
                .find(|&y| factors.iter().all(|&q| field.pow(y, order / q) != 1))
                .expect("the multiplicative group is cyclic");
            primes.push(BasisPrime {
                field,
                cyclic_root: field.pow(root, 1u64 << log2),
                pow2_root: field.pow(root, cyclic_len as u64),
            });
            bits += (p as f64).log2();
        }
        if primes.len() < 2 || bits <= min_bits as f64 {
            return Err(Error::Budget(format!(
                "could not find enough primes for {min_bits} bits"
            )));
        }
        let garner = (0..primes.len())
            .map(|i| {
                let f = primes[i].field;
                let prefix = primes[..i].iter().fold(1, |acc, q| f.mul(acc, q.field.p % f.p));
                f.inv(prefix)
            })
            .collect();
        Ok(PrimeBasis {
            cyclic_len,
            log2,
            primes,
            garner,
        })
    }

    pub fn product(&self) -> BigUint {
        self.primes.iter().map(|q| BigUint::from(q.field.p)).product()
    }

    /// Residues of `x` modulo every prime.
    pub fn residues(&self, x: &BigUint) -> Vec<u64> {
        self.primes.iter().map(|q| q.field.reduce(x)).collect()
    }

    /// Number of leading primes whose product exceeds `2^bits` (at least two).
    pub fn primes_for_bits(&self, bits: u64) -> usize {
        let mut acc = 0.0f64;
        for (i, q) in self.primes.iter().enumerate() {
            acc += (q.field.p as f64).log2();
            if i >= 1 && acc > bits as f64 + 1.0 {
                return i + 1;
            }
        }
        self.primes.len()
    }

    /// Smallest non-negative integer with the given residues (Garner)
    /// modulo the leading `residues.len()` primes.
    pub fn reconstruct(&self, residues: &[u64]) -> BigUint {
        let k = residues.len().min(self.primes.len());
        let mut coeffs: Vec<u64> = Vec::with_capacity(k);
        for i in 0..k {
            let f = self.primes[i].field;
            // value of the partial sum modulo p_i
            let mut acc = 0u64;
            let mut scale = 1u64;
            for (j, &cj) in coeffs.iter().enumerate() {
                acc = f.add(acc, f.mul(cj % f.p, scale));
                scale = f.mul(scale, self.primes[j].field.p % f.p);
            }
            coeffs.push(f.mul(f.sub(residues[i] % f.p, acc), self.garner[i]));
        }
        let top = coeffs.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        if top <= 2 {
            let lo = coeffs.first().copied().unwrap_or(0) as u128;
            let hi = coeffs.get(1).copied().unwrap_or(0) as u128;
            return BigUint::from(lo + hi * self.primes[0].field.p as u128);
        }
        let mut out = BigUint::zero();
        let mut scale = BigUint::from(1u32);
        for (j, &cj) in coeffs[..top].iter().enumerate() {
            out += &scale * cj;
            scale *= self.primes[j].field.p;
        }
        out
    }
}

/// Montgomery multiplication modulo an odd `p < 2^62` with `R = 2^64`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u64,
    neg_inv: u64,
}

impl Mont {
    fn new(p: u64) -> Mont {
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        Mont {
            p,
            neg_inv: inv.wrapping_neg(),
        }
    }

    /// `a * b / R mod p`, so `a * b` when `b` is in Montgomery form.
    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    fn lift(self, b: u64) -> u64 {
        (((b as u128) << 64) % self.p as u128) as u64
    }
}

/// Bit-reversal table and twiddles for one power-of-two length.
struct Pow2Plan {
    rev: Vec<usize>,
    tw: Vec<u64>,
}

impl Pow2Plan {
    fn new(f: PrimeField, mont: Mont, n: usize, root: u64) -> Pow2Plan {
        debug_assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        let rev = if n <= 1 {
            vec![0; n]
        } else {
            (0..n).map(|i| i.reverse_bits() >> (usize::BITS - bits)).collect()
        };
        let mut tw = Vec::with_capacity(n / 2);
        let mut x = 1u64;
        for _ in 0..n / 2 {
            tw.push(mont.lift(x));
            x = f.mul(x, root);
        }
        Pow2Plan { rev, tw }
    }

    fn run(&self, f: PrimeField, mont: Mont, a: &mut [u64]) {
        let n = a.len();
        if n <= 1 {
            return;
        }
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k];
                    let v = mont.mul(hi[k], self.tw[k * step]);
                    lo[k] = f.add(u, v);
                    hi[k] = f.sub(u, v);
                }
            }
            len <<= 1;
        }
    }
}

/// In-place cyclic NTT of power-of-two length `a.len()`; `root` has order
/// exactly `a.len()`.
pub fn ntt(f: PrimeField, a: &mut [u64], root: u64) {
    let mont = Mont::new(f.p);
    Pow2Plan::new(f, mont, a.len(), root).run(f, mont, a);
}

/// Naive DFT of arbitrary length with a root of matching order.
pub fn dft(f: PrimeField, a: &mut [u64], root: u64) {
    let n = a.len();
    if n <= 1 {
        return;
    }
    let src = a.to_vec();
    let mut wk = 1u64;
    for out in a.iter_mut() {
        let mut acc = 0u64;
        let mut x = 1u64;
        for &s in &src {
            acc = f.add(acc, f.mul(s, x));
            x = f.mul(x, wk);
        }
        *out = acc;
        wk = f.mul(wk, root);
    }
}

/// Length-`c` DFT along one axis, applied in place across strided lines.
fn cyclic_axis(f: PrimeField, mont: Mont, data: &mut [u64], dims: &[usize], axis: usize, root: u64) {
    let c = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let block = c * stride;
    match c {
        0 | 1 => {}
        2 => {
            for chunk in data.chunks_exact_mut(block) {
                let (x0, x1) = chunk.split_at_mut(stride);
                for i in 0..stride {
                    let (a, b) = (x0[i], x1[i]);
                    x0[i] = f.add(a, b);
                    x1[i] = f.sub(a, b);
                }
            }
        }
        3 => {
            // 1 + w + w^2 = 0 leaves a single product per triple
            let w = mont.lift(root);
            for chunk in data.chunks_exact_mut(block) {
                let (x0, rest) = chunk.split_at_mut(stride);
                let (x1, x2) = rest.split_at_mut(stride);
                for i in 0..stride {
                    let (a, b, c) = (x0[i], x1[i], x2[i]);
                    let t = mont.mul(f.sub(b, c), w);
                    x0[i] = f.add(f.add(a, b), c);
                    x1[i] = f.add(f.sub(a, c), t);
                    x2[i] = f.sub(f.sub(a, b), t);
                }
            }
        }
        _ => {
            let mut mat = vec![0u64; c * c];
            for j in 0..c {
                let wj = f.pow(root, j as u64);
                let mut x = 1u64;
                for k in 0..c {
                    mat[j * c + k] = mont.lift(x);
                    x = f.mul(x, wj);
                }
            }
            let mut src = vec![0u64; c];
            for chunk in data.chunks_exact_mut(block) {
                for i in 0..stride {
                    for k in 0..c {
                        src[k] = chunk[k * stride + i];
                    }
                    for j in 0..c {
                        let row = &mat[j * c..(j + 1) * c];
                        chunk[j * stride + i] = src
                            .iter()
                            .zip(row)
                            .fold(0, |acc, (&s, &w)| f.add(acc, mont.mul(s, w)));
                    }
                }
            }
        }
    }
}

/// Power-of-two transform along one axis; all-zero lines are skipped.
fn pow2_axis(f: PrimeField, mont: Mont, data: &mut [u64], dims: &[usize], axis: usize, plan: &Pow2Plan) {
    let len = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    if stride == 1 {
        for line in data.chunks_exact_mut(len) {
            if line.iter().any(|&x| x != 0) {
                plan.run(f, mont, line);
            }
        }
        return;
    }
    let mut buf = vec![0u64; len];
    for chunk in data.chunks_exact_mut(len * stride) {
        for i in 0..stride {
            for k in 0..len {
                buf[k] = chunk[k * stride + i];
            }
            if buf.iter().all(|&x| x == 0) {
                continue;
            }
            plan.run(f, mont, &mut buf);
            for k in 0..len {
                chunk[k * stride + i] = buf[k];
            }
        }
    }
}

/// Pointwise product `x *= y` modulo the prime.
pub(crate) fn pointwise_mul(bp: &BasisPrime, x: &mut [u64], y: &[u64]) {
    let mont = Mont::new(bp.field.p);
    let r2 = mont.lift(mont.lift(1));
    for (u, &v) in x.iter_mut().zip(y) {
        *u = mont.mul(mont.mul(*u, v), r2);
    }
}

fn pow2_root(bp: &BasisPrime, basis: &PrimeBasis, len: usize) -> u64 {
    bp.field.pow(bp.pow2_root, (1u64 << basis.log2) / len as u64)
}

/// Shape of a mixed array: `cyclic_dims` axes of length `cyclic_len`
/// followed by non-cyclic axes with the given ranges. Row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvShape {
    pub cyclic_dims: usize,
    pub cyclic_len: usize,
    pub ranges: Vec<usize>,
}

impl ConvShape {
    pub fn len(&self) -> usize {
        self.cyclic_len.pow(self.cyclic_dims as u32) * self.ranges.iter().product::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn padded(&self) -> Vec<usize> {
        let mut dims = vec![self.cyclic_len; self.cyclic_dims];
        dims.extend(self.ranges.iter().map(|&q| (2 * q.max(1) - 1).next_power_of_two()));
        dims
    }
}

fn embed(src: &[u64], shape: &ConvShape, dims: &[usize]) -> Vec<u64> {
    let total: usize = dims.iter().product();
    let mut out = vec![0u64; total];
    let full: Vec<usize> = {
        let mut d = vec![shape.cyclic_len; shape.cyclic_dims];
        d.extend(&shape.ranges);
        d
    };
    let mut idx = vec![0usize; full.len()];
    for &v in src {
        let pos = idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i);
        out[pos] = v;
        for a in (0..full.len()).rev() {
            idx[a] += 1;
            if idx[a] < full[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

fn extract(src: &[u64], shape: &ConvShape, dims: &[usize]) -> Vec<u64> {
    let full: Vec<usize> = {
        let mut d = vec![shape.cyclic_len; shape.cyclic_dims];
        d.extend(&shape.ranges);
        d
    };
    let total: usize = full.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; full.len()];
    for _ in 0..total {
        let pos = idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i);
        out.push(src[pos]);
        for a in (0..full.len()).rev() {
            idx[a] += 1;
            if idx[a] < full[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

/// Forward transform of an already padded array.
pub(crate) fn forward(bp: &BasisPrime, basis: &PrimeBasis, data: &mut [u64], dims: &[usize], cyclic_dims: usize) {
    let f = bp.field;
    let mont = Mont::new(f.p);
    // sparse trailing axes first so zero lines can be skipped
    for axis in (0..dims.len()).rev() {
        let len = dims[axis];
        if len <= 1 {
            continue;
        }
        if axis < cyclic_dims {
            cyclic_axis(f, mont, data, dims, axis, bp.cyclic_root);
        } else {
            let plan = Pow2Plan::new(f, mont, len, pow2_root(bp, basis, len));
            pow2_axis(f, mont, data, dims, axis, &plan);
        }
    }
}

/// Inverse of [`forward`], including the normalisation.
pub(crate) fn inverse(bp: &BasisPrime, basis: &PrimeBasis, data: &mut [u64], dims: &[usize], cyclic_dims: usize) {
    let f = bp.field;
    let mont = Mont::new(f.p);
    for (axis, &len) in dims.iter().enumerate() {
        if len <= 1 {
            continue;
        }
        if axis < cyclic_dims {
            cyclic_axis(f, mont, data, dims, axis, f.inv(bp.cyclic_root));
        } else {
            let plan = Pow2Plan::new(f, mont, len, f.inv(pow2_root(bp, basis, len)));
            pow2_axis(f, mont, data, dims, axis, &plan);
        }
    }
    let scale = mont.lift(f.inv(dims_product(f, dims)));
    for x in data.iter_mut() {
        *x = mont.mul(*x, scale);
    }
}

fn dims_product(f: PrimeField, dims: &[usize]) -> u64 {
    dims.iter().map(|&d| d as u64 % f.p).fold(1, |a, d| f.mul(a, d))
}

/// Inverse transform for arrays with exactly two non-cyclic axes that only
/// recovers, for each cyclic cell, the last-axis line at position
/// `pick(cell)` of the middle axis. Returns `cells * dims[last]` values.
pub(crate) fn inverse_picked(
    bp: &BasisPrime,
    basis: &PrimeBasis,
    data: &mut [u64],
    dims: &[usize],
    cyclic_dims: usize,
    pick: impl Fn(usize) -> usize,
) -> Vec<u64> {
    assert_eq!(dims.len(), cyclic_dims + 2, "two non-cyclic axes expected");
    let f = bp.field;
    let mont = Mont::new(f.p);
    for axis in 0..cyclic_dims {
        cyclic_axis(f, mont, data, dims, axis, f.inv(bp.cyclic_root));
    }
    let (pm, pl) = (dims[cyclic_dims], dims[cyclic_dims + 1]);
    let cells = data.len() / (pm * pl);
    let scale = f.inv(dims_product(f, dims));
    let wm = f.inv(pow2_root(bp, basis, pm));
    let mut tw = Vec::with_capacity(pm);
    let mut x = scale;
    for _ in 0..pm {
        tw.push(mont.lift(x));
        x = f.mul(x, wm);
    }
    let plan = Pow2Plan::new(f, mont, pl, f.inv(pow2_root(bp, basis, pl)));
    let mut out = vec![0u64; cells * pl];
    for (cell, line) in out.chunks_exact_mut(pl).enumerate() {
        let at = pick(cell);
        let block = &data[cell * pm * pl..(cell + 1) * pm * pl];
        for (j, row) in block.chunks_exact(pl).enumerate() {
            let w = tw[(at * j) % pm];
            for (o, &v) in line.iter_mut().zip(row) {
                *o = f.add(*o, mont.mul(v, w));
            }
        }
        plan.run(f, mont, line);
    }
    out
}

/// Checks that the basis supports the padded shape.
pub(crate) fn check_shape(basis: &PrimeBasis, dims: &[usize], cyclic_dims: usize) -> Result<()> {
    for (axis, &len) in dims.iter().enumerate() {
        let ok = if axis < cyclic_dims {
            len == basis.cyclic_len
        } else {
            len.is_power_of_two() && len <= 1usize << basis.log2
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "basis has no root of unity of order {len}"
            )));
        }
    }
    Ok(())
}

/// Partially cyclic, partially non-cyclic convolution modulo prime
/// `prime` of the basis: cyclic (mod `cyclic_len`) in the first
/// `cyclic_dims` axes, truncated linear in the remaining ones.
pub fn multidim_convolution(
    f: &[u64],
    g: &[u64],
    shape: &ConvShape,
    basis: &PrimeBasis,
    prime: usize,
) -> Result<Vec<u64>> {
    if f.len() != shape.len() || g.len() != shape.len() {
        return Err(Error::Precondition("array length does not match the shape".into()));
    }
    if shape.cyclic_dims > 0 && shape.cyclic_len != basis.cyclic_len {
        return Err(Error::Precondition(format!(
            "basis has no root of unity of order {}",
            shape.cyclic_len
        )));
    }
    let dims = shape.padded();
    check_shape(basis, &dims, shape.cyclic_dims)?;
    let bp = &basis.primes[prime];
    let mut a = embed(f, shape, &dims);
    let mut b = embed(g, shape, &dims);
    forward(bp, basis, &mut a, &dims, shape.cyclic_dims);
    forward(bp, basis, &mut b, &dims, shape.cyclic_dims);
    pointwise_mul(bp, &mut a, &b);
    inverse(bp, basis, &mut a, &dims, shape.cyclic_dims);
    Ok(extract(&a, shape, &dims))
}
