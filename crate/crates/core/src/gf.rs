//! Fully tabulated finite fields GF(p^n) and quadratic extensions.
//!
//! Elements are encoded as integers in [0, q): the base-p packing of the
//! polynomial coefficients, constant term first. Multiplication, inversion
//! and powers go through discrete log/exp tables against a fixed generator;
//! addition works on the packed digits directly. Tables are deterministic:
//! the modulus is the lexicographically smallest monic irreducible (constant
//! term first) and the generator is the smallest element code of full order.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Packed element code in [0, q).
pub type Elem = u32;

pub const MAX_Q: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// Shape of a finite field: characteristic, degree and the chosen modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    /// Monic irreducible of degree n over GF(p), constant term first.
    pub modulus: Vec<u32>,
}

/// A tabulated field GF(p^n): log/exp tables against a fixed generator,
/// plus the trace map down to GF(p). Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldTable {
    spec: FieldSpec,
    gen: Elem,
    log: Vec<u32>,
    exp: Vec<Elem>,
    trace: Vec<u32>,
}

// -------------------------------------------------------------------------
// polynomial helpers over GF(p), digits constant-term first
// -------------------------------------------------------------------------

fn decode(code: Elem, p: u32, n: u32) -> Vec<u32> {
    let mut c = code;
    (0..n)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode(digits: &[u32], p: u32) -> Elem {
    let mut code = 0u64;
    for &d in digits.iter().rev() {
        code = code * p as u64 + d as u64;
    }
    code as Elem
}

fn poly_deg(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Schoolbook product reduced by the monic `modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += ai as u64 * bj as u64;
        }
    }
    let mut prod: Vec<u32> = prod.iter().map(|&c| (c % p as u64) as u32).collect();
    // reduce: x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1})
    for i in (n..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &mk) in modulus.iter().take(n).enumerate() {
            let sub = (c as u64 * mk as u64) % p as u64;
            prod[i - n + k] = ((prod[i - n + k] as u64 + p as u64 - sub) % p as u64) as u32;
        }
    }
    prod.truncate(n.max(1));
    prod.resize(n.max(1), 0);
    prod
}

fn poly_pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut acc = vec![0u32; n.max(1)];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

/// Remainder of a by monic b over GF(p).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = poly_deg(b).expect("divisor must be nonzero");
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let c = r[dr];
        for k in 0..=db {
            let sub = (c as u64 * b[k] as u64) % p as u64;
            r[dr - db + k] = ((r[dr - db + k] as u64 + p as u64 - sub) % p as u64) as u32;
        }
    }
    r
}

/// Irreducibility over GF(p) by root exclusion plus trial division by every
/// monic polynomial of degree up to n/2.
fn poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let n = match poly_deg(m) {
        Some(d) => d,
        None => return false,
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // no roots in GF(p)
    for x in 0..p {
        let mut acc = 0u64;
        for &c in m.iter().rev() {
            acc = (acc * x as u64 + c as u64) % p as u64;
        }
        if acc == 0 {
            return false;
        }
    }
    // no monic factor of degree 2..=n/2
    for d in 2..=n / 2 {
        let count = (p as u64).pow(d as u32);
        let mut div = vec![0u32; d + 1];
        div[d] = 1;
        for code in 0..count {
            let mut c = code;
            for digit in div.iter_mut().take(d) {
                *digit = (c % p as u64) as u32;
                c /= p as u64;
            }
            if poly_deg(&poly_rem(m, &div, p)).is_none() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree n, compared by
/// coefficient sequence from the constant term up.
fn smallest_irreducible(p: u32, n: u32) -> Result<Vec<u32>> {
    let n = n as usize;
    let count = (p as u64).checked_pow(n as u32).unwrap();
    let mut m = vec![0u32; n + 1];
    m[n] = 1;
    for lex in 0..count {
        // constant term is the most significant position in the lex order
        let mut c = lex;
        for i in (0..n).rev() {
            m[i] = (c % p as u64) as u32;
            c /= p as u64;
        }
        if poly_is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::NoIrreducible(n as u32))
}

// -------------------------------------------------------------------------
// FieldTable
// -------------------------------------------------------------------------

impl FieldTable {
    /// Build GF(p^n). When `modulus` is omitted the lexicographically
    /// smallest monic irreducible is selected; the generator is the smallest
    /// element code of multiplicative order q-1.
    pub fn build(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<FieldTable> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n < 1 {
            return Err(Error::BadDegree(n));
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= MAX_Q)
            .ok_or(Error::FieldTooLarge {
                q: (p as u64).saturating_pow(n),
            })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus { expected: n });
                }
                if !poly_is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus { p: p as u64 });
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, n)?,
        };
        let spec = FieldSpec {
            p,
            n,
            q: q as u32,
            modulus,
        };
        Self::from_spec(spec)
    }

    fn from_spec(spec: FieldSpec) -> Result<FieldTable> {
        let (p, n, q) = (spec.p, spec.n, spec.q);
        let order = q as u64 - 1;
        let factors = prime_factors(order);

        // smallest code of full multiplicative order
        let mut gen = 0;
        'cand: for cand in 1..q {
            let digits = decode(cand, p, n);
            for &f in &factors {
                let pow = poly_pow_mod(&digits, order / f, &spec.modulus, p);
                if encode(&pow, p) == 1 {
                    continue 'cand;
                }
            }
            gen = cand;
            break;
        }
        debug_assert!(gen != 0 || q == 2);
        if q == 2 {
            gen = 1;
        }

        let gen_digits = decode(gen, p, n);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = vec![0u32; n as usize];
        cur[0] = 1;
        for i in 0..order {
            let code = encode(&cur, p);
            exp.push(code);
            log[code as usize] = i as u32;
            cur = poly_mul_mod(&cur, &gen_digits, &spec.modulus, p);
        }
        debug_assert_eq!(encode(&cur, p), 1, "generator order mismatch");

        let mut tbl = FieldTable {
            spec,
            gen,
            log,
            exp,
            trace: Vec::new(),
        };
        tbl.trace = (0..q).map(|x| tbl.compute_trace(x)).collect();
        Ok(tbl)
    }

    fn compute_trace(&self, x: Elem) -> u32 {
        if x == 0 {
            return 0;
        }
        let order = self.spec.q as u64 - 1;
        let mut acc = 0;
        let mut cur = x;
        for _ in 0..self.spec.n {
            acc = self.add(acc, cur);
            cur = self.exp[((self.log[cur as usize] as u64 * self.spec.p as u64) % order) as usize];
        }
        debug_assert!(acc < self.spec.p, "trace landed outside the prime subfield");
        acc
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn q(&self) -> u32 {
        self.spec.q
    }

    pub fn generator(&self) -> Elem {
        self.gen
    }

    pub fn check_element(&self, code: u64) -> Result<Elem> {
        if code < self.spec.q as u64 {
            Ok(code as Elem)
        } else {
            Err(Error::BadElement {
                code,
                q: self.spec.q as u64,
            })
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.n == 1 {
            return ((a as u64 + b as u64) % p as u64) as Elem;
        }
        let mut out = 0u64;
        let (mut a, mut b) = (a, b);
        let mut place = 1u64;
        for _ in 0..self.spec.n {
            let d = (a % p + b % p) % p;
            out += d as u64 * place;
            place *= p as u64;
            a /= p;
            b /= p;
        }
        out as Elem
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.n == 1 {
            return ((p as u64 - a as u64) % p as u64) as Elem;
        }
        let mut out = 0u64;
        let mut a = a;
        let mut place = 1u64;
        for _ in 0..self.spec.n {
            let d = (p - a % p) % p;
            out += d as u64 * place;
            place *= p as u64;
            a /= p;
        }
        out as Elem
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.spec.q as u64 - 1;
        let i = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[i as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInversion);
        }
        let order = self.spec.q as u64 - 1;
        let i = (order - self.log[a as usize] as u64) % order;
        Ok(self.exp[i as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = self.spec.q as u64 - 1;
        let i = (self.log[a as usize] as u64 % order * (e % order)) % order;
        self.exp[i as usize]
    }

    /// Discrete log of a nonzero element against the fixed generator.
    pub fn log(&self, x: Elem) -> Option<u32> {
        let l = self.log[x as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn exp_at(&self, i: u64) -> Elem {
        self.exp[(i % (self.spec.q as u64 - 1)) as usize]
    }

    /// Tr(x) = x + x^p + ... + x^{p^{n-1}}, as an integer in [0, p).
    pub fn trace_of(&self, x: Elem) -> u32 {
        self.trace[x as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.spec.q
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.spec.q
    }

    // ---------------------------------------------------------------------
    // table dump/load
    // ---------------------------------------------------------------------

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let dump = TableDump {
            version: 1,
            p: self.spec.p,
            n: self.spec.n,
            modulus: self.spec.modulus.clone(),
            gen: self.gen,
            exp: self.exp.clone(),
        };
        std::fs::write(path, serde_json::to_vec(&dump)?)?;
        Ok(())
    }

    /// Load a dumped table. The exp chain is cross-checked against
    /// polynomial arithmetic with the stored modulus; log and trace are
    /// rebuilt from scratch.
    pub fn load_json(path: &Path) -> Result<FieldTable> {
        let dump: TableDump = serde_json::from_slice(&std::fs::read(path)?)?;
        if dump.version != 1 {
            return Err(Error::CorruptTable(format!(
                "unsupported version {}",
                dump.version
            )));
        }
        let rebuilt = FieldTable::build(dump.p, dump.n, Some(&dump.modulus))?;
        if rebuilt.gen != dump.gen || rebuilt.exp != dump.exp {
            return Err(Error::CorruptTable(
                "stored exp table disagrees with rebuild".into(),
            ));
        }
        Ok(rebuilt)
    }

    /// Fault injection for the mutation-sensitivity tests: a copy of the
    /// table with log(x) advanced by one, so every character evaluation at x
    /// is off by one root-of-unity step. Not part of the public contract.
    #[doc(hidden)]
    pub fn with_tampered_log(&self, x: Elem) -> FieldTable {
        assert!(x != 0 && x < self.spec.q, "need a unit to tamper with");
        let mut t = self.clone();
        t.log[x as usize] = (t.log[x as usize] + 1) % (self.spec.q - 1);
        t
    }
}

#[derive(Serialize, Deserialize)]
struct TableDump {
    version: u32,
    p: u32,
    n: u32,
    modulus: Vec<u32>,
    gen: Elem,
    exp: Vec<Elem>,
}

// -------------------------------------------------------------------------
// Quadratic extension GF(q^2) = GF(q)(omega), omega^2 = delta
// -------------------------------------------------------------------------

/// GF(q^2) over a base GF(q) with odd q, generated by a square root omega of
/// the smallest non-square delta of the base field. The embedding sends the
/// class of x in the base representation to a root of the base modulus.
#[derive(Clone)]
pub struct QuadExtension {
    pub base: Arc<FieldTable>,
    pub ext: Arc<FieldTable>,
    pub omega: Elem,
    pub delta: Elem,
    embed: Vec<Elem>,
}

impl QuadExtension {
    pub fn build(base: Arc<FieldTable>) -> Result<QuadExtension> {
        let q = base.q() as u64;
        if q.is_multiple_of(2) {
            return Err(Error::EvenField);
        }
        if q * q > MAX_Q {
            return Err(Error::FieldTooLarge { q: q * q });
        }

        // smallest non-square: delta^((q-1)/2) != 1
        let half = (q - 1) / 2;
        let delta = base
            .units()
            .find(|&d| base.pow(d, half) != 1)
            .expect("odd q > 1 has a non-square");

        let ext = Arc::new(FieldTable::build(base.p(), base.n() * 2, None)?);

        // smallest root of the base modulus inside the extension
        let m = &base.spec().modulus;
        let beta = ext
            .elements()
            .find(|&cand| {
                let mut acc: Elem = 0;
                for &c in m.iter().rev() {
                    acc = ext.add(ext.mul(acc, cand), c);
                }
                acc == 0
            })
            .expect("base modulus splits in the quadratic extension");

        // embed by evaluating coefficient digits at beta
        let (p, n) = (base.p(), base.n());
        let mut beta_pows = vec![1 as Elem; n as usize];
        for i in 1..n as usize {
            beta_pows[i] = ext.mul(beta_pows[i - 1], beta);
        }
        let embed: Vec<Elem> = base
            .elements()
            .map(|x| {
                let digits = decode(x, p, n);
                digits
                    .iter()
                    .zip(&beta_pows)
                    .fold(0, |acc, (&c, &bp)| ext.add(acc, ext.mul(c, bp)))
            })
            .collect();

        // omega: smaller of the two square roots of embed(delta) in GF(q^2)
        let target = embed[delta as usize];
        let r = ext.log(target).expect("delta is nonzero") as u64;
        debug_assert_eq!(r % 2, 0, "every base element is a square upstairs");
        let half_order = (ext.q() as u64 - 1) / 2;
        let w1 = ext.exp_at(r / 2);
        let w2 = ext.exp_at(r / 2 + half_order);
        let omega = w1.min(w2);

        let qe = QuadExtension {
            base,
            ext,
            omega,
            delta,
            embed,
        };
        qe.validate()?;
        Ok(qe)
    }

    fn validate(&self) -> Result<()> {
        let q = self.base.q();
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::CorruptTable(format!("embedding failed: {what}")))
            }
        };
        check(
            self.ext.mul(self.omega, self.omega) == self.embed[self.delta as usize],
            "omega^2 != embed(delta)",
        )?;
        check(
            !self.embed.contains(&self.omega),
            "omega lies in the base image",
        )?;
        // ring-homomorphism spot check; exhaustive for small q
        let step = if q <= 128 { 1 } else { (q / 97).max(1) };
        for a in (0..q).step_by(step as usize) {
            for b in (0..q).step_by(step as usize) {
                check(
                    self.embed(self.base.add(a, b)) == self.ext.add(self.embed(a), self.embed(b)),
                    "additivity",
                )?;
                check(
                    self.embed(self.base.mul(a, b)) == self.ext.mul(self.embed(a), self.embed(b)),
                    "multiplicativity",
                )?;
            }
        }
        Ok(())
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x as usize]
    }
}
