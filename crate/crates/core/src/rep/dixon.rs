//! Burnside-Dixon: irreducible characters from class multiplication
//! coefficients, diagonalized simultaneously over `F_p` with
//! `p = 1 mod exp(G)` and lifted back through power maps.

use num::BigInt;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::group::FiniteGroup;

use super::RepError;

/// Beyond this many classes the cubic coefficient tensor gets impractical.
const MAX_CLASSES: usize = 400;

pub(super) fn dixon_characters(group: &FiniteGroup) -> Result<Vec<Vec<Cyclotomic>>, RepError> {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    if k > MAX_CLASSES {
        return Err(RepError::TableLimits(format!("{k} classes exceeds the limit of {MAX_CLASSES}")));
    }
    let order = group.order() as u64;
    let exponent = group.exponent() as u64;
    let p = choose_prime(exponent, order);
    let f = Fp(p);

    let sizes: Vec<u64> = classes.iter().map(|c| c.size() as u64).collect();
    let inverse_class: Vec<usize> =
        classes.iter().map(|c| group.class_index(group.inv(c.representative))).collect();

    // coeff[j][a][l] = #{x in C_j : x^-1 z_l in C_a}, z_l the representative of C_l.
    let mut coeff = vec![vec![vec![0u64; k]; k]; k];
    for (l, cl) in classes.iter().enumerate() {
        let z = cl.representative;
        for (j, cj) in classes.iter().enumerate() {
            for &x in &cj.members {
                let y = group.mul(group.inv(x), z);
                coeff[j][group.class_index(y)][l] += 1;
            }
        }
    }

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity_basis(k)];
    for matrix in coeff.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
            } else {
                next.extend(split(&f, matrix, &space)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(RepError::TableLimits("class algebra did not split into lines".into()));
    }

    let z = f.primitive_root_of_order(exponent);
    let mut rows = Vec::with_capacity(k);
    for space in spaces {
        let mut omega = space.into_iter().next().expect("one-dimensional space");
        let lead = f.inv(omega[0]);
        for w in omega.iter_mut() {
            *w = f.mul(*w, lead);
        }
        let mut s = 0;
        for j in 0..k {
            let t = f.mul(f.mul(omega[j], omega[inverse_class[j]]), f.inv(sizes[j] % p));
            s = f.add(s, t);
        }
        let target = f.mul(order % p, f.inv(s));
        let degree = (1..=order)
            .take_while(|d| d * d <= order)
            .find(|d| f.mul(*d, *d) == target)
            .ok_or_else(|| RepError::TableLimits("no admissible degree".into()))?;
        let chi_mod_p: Vec<u64> = (0..k)
            .map(|j| f.mul(f.mul(degree, omega[j]), f.inv(sizes[j] % p)))
            .collect();
        rows.push(lift_row(group, &f, z, degree, &chi_mod_p)?);
    }
    Ok(rows)
}

/// Recovers `chi(g) = sum_alpha m_alpha zeta_e^alpha` from values mod p,
/// `m_alpha = e^-1 sum_t chi(g^t) z^(-alpha t)` read as integers in `[0, degree]`.
fn lift_row(
    group: &FiniteGroup,
    f: &Fp,
    z: u64,
    degree: u64,
    chi_mod_p: &[u64],
) -> Result<Vec<Cyclotomic>, RepError> {
    let exponent = group.exponent() as u64;
    let mut out = Vec::with_capacity(chi_mod_p.len());
    for class in group.conjugacy_classes() {
        let g = class.representative;
        let e = group.element_order(g) as u64;
        let root = f.pow(z, exponent / e);
        let root_inv = f.inv(root);
        let e_inv = f.inv(e % f.0);
        let values: Vec<u64> =
            (0..e).map(|t| chi_mod_p[group.class_index(group.pow(g, t as i64))]).collect();
        let mut coeffs = vec![Rational::from_integer(BigInt::from(0)); e as usize];
        let mut total = 0;
        for alpha in 0..e {
            let step = f.pow(root_inv, alpha);
            let mut acc = 0;
            let mut w = 1;
            for &v in &values {
                acc = f.add(acc, f.mul(v, w));
                w = f.mul(w, step);
            }
            let m = f.mul(acc, e_inv);
            if m > degree {
                return Err(RepError::TableLimits("eigenvalue multiplicity out of range".into()));
            }
            total += m;
            coeffs[alpha as usize] = Rational::from_integer(BigInt::from(m));
        }
        if total != degree {
            return Err(RepError::TableLimits("eigenvalue multiplicities do not sum to the degree".into()));
        }
        out.push(Cyclotomic::from_exponents(e as u32, coeffs));
    }
    Ok(out)
}

/// Splits an invariant subspace (row basis in RREF) into eigenspaces of `matrix`,
/// acting on column vectors.
fn split(f: &Fp, matrix: &[Vec<u64>], basis: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>, RepError> {
    let m = basis.len();
    let k = matrix.len();
    let pivots: Vec<usize> =
        basis.iter().map(|v| v.iter().position(|&x| x != 0).expect("nonzero basis row")).collect();
    // restricted[s][t]: coordinate s of A v_t.
    let mut restricted = vec![vec![0u64; m]; m];
    for (t, v) in basis.iter().enumerate() {
        let image: Vec<u64> = (0..k)
            .map(|a| (0..k).fold(0, |acc, l| f.add(acc, f.mul(matrix[a][l] % f.0, v[l]))))
            .collect();
        for (s, &pv) in pivots.iter().enumerate() {
            restricted[s][t] = image[pv];
        }
    }
    let mut pieces = Vec::new();
    let mut found = 0;
    for lambda in 0..f.0 {
        let shifted: Vec<Vec<u64>> = (0..m)
            .map(|s| (0..m).map(|t| if s == t { f.sub(restricted[s][t], lambda) } else { restricted[s][t] }).collect())
            .collect();
        let null = nullspace(f, shifted);
        if null.is_empty() {
            continue;
        }
        found += null.len();
        let vectors: Vec<Vec<u64>> = null
            .iter()
            .map(|c| {
                (0..k)
                    .map(|x| (0..m).fold(0, |acc, t| f.add(acc, f.mul(c[t], basis[t][x]))))
                    .collect()
            })
            .collect();
        pieces.push(rref(f, vectors));
        if found == m {
            return Ok(pieces);
        }
    }
    Err(RepError::TableLimits("class matrix is not diagonalizable mod p".into()))
}

fn identity_basis(k: usize) -> Vec<Vec<u64>> {
    (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
}

/// Reduced row echelon form, zero rows dropped.
fn rref(f: &Fp, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..cols {
                    let t = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Basis of `{x : M x = 0}`.
fn nullspace(f: &Fp, matrix: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let n = matrix.first().map_or(0, Vec::len);
    let reduced = rref(f, matrix);
    let pivots: Vec<usize> =
        reduced.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Smallest prime `p = 1 mod exponent` with `p > 2 sqrt(order)`.
fn choose_prime(exponent: u64, order: u64) -> u64 {
    let mut p = exponent + 1;
    loop {
        if p * p > 4 * order && is_prime(p) {
            return p;
        }
        p += exponent;
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Arithmetic in the prime field of the given order.
struct Fp(u64);

impl Fp {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }

    fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.0) * (b % self.0) % self.0
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.0 != 0, "inverting zero mod p");
        self.pow(a, self.0 - 2)
    }

    fn primitive_root_of_order(&self, e: u64) -> u64 {
        let p = self.0;
        let factors = prime_factors(p - 1);
        let generator = (2..p)
            .find(|&g| factors.iter().all(|q| self.pow(g, (p - 1) / q) != 1))
            .unwrap_or(1);
        self.pow(generator, (p - 1) / e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_choice() {
        // S3: exponent 6, order 6 -> p = 7 already exceeds 2 sqrt 6
        assert_eq!(choose_prime(6, 6), 7);
        assert_eq!(choose_prime(1, 1), 3);
        assert_eq!(choose_prime(12, 24), 13);
    }

    #[test]
    fn nullspace_mod_p() {
        let f = Fp(7);
        let ns = nullspace(&f, vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(ns, vec![vec![6, 1]]);
    }

    #[test]
    fn primitive_roots() {
        let f = Fp(13);
        let z = f.primitive_root_of_order(12);
        assert_eq!(f.pow(z, 12), 1);
        assert!((1..12).all(|k| f.pow(z, k) != 1));
    }
}
