//! Dense linear algebra over the prime field F_p.
//!
//! Used wherever an F_p-linear map has to be inverted: the residue-level
//! Artin-Schreier map y -> y^p - y and the principal-part system of the
//! rational membership decision.

/// Solves `rows * x = rhs` over F_p. Returns one solution with all free
/// variables set to zero, or `None` when the system is inconsistent.
///
/// `rows` is a list of equations, each of length `unknowns`.
pub(crate) fn solve(rows: &[Vec<u64>], rhs: &[u64], unknowns: usize, p: u64) -> Option<Vec<u64>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = Vec::with_capacity(unknowns + 1);
            row.extend(r.iter().map(|&x| x % p));
            row.push(b % p);
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..=unknowns {
                    let sub = factor * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }

    if m[rank..].iter().any(|row| row[unknowns] != 0) {
        return None;
    }
    let mut x = vec![0; unknowns];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][unknowns];
    }
    Some(x)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo the prime `p`; `a` must be nonzero mod p.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}
