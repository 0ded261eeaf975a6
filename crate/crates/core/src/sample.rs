//! Random elements for property checks, scans and corpus generation.

use rand::Rng;

use crate::finite_field::Field;
use crate::laurent::LaurentSeries;
use crate::poly::Poly;
use crate::rational::RatFunc;

/// Polynomial of degree at most `max_deg`.
pub fn poly<R: Rng + ?Sized>(field: &Field, max_deg: usize, rng: &mut R) -> Poly {
    let cs: Vec<_> = (0..=max_deg).map(|_| field.random(rng)).collect();
    Poly::from_coeffs(field, &cs).expect("same field")
}

/// Polynomial with nonzero constant term.
pub fn unit_poly<R: Rng + ?Sized>(field: &Field, max_deg: usize, rng: &mut R) -> Poly {
    let mut cs: Vec<_> = (0..=max_deg).map(|_| field.random(rng)).collect();
    cs[0] = field.random_nonzero(rng);
    Poly::from_coeffs(field, &cs).expect("same field")
}

/// num/den with the given degree bounds; den monic and nonzero.
pub fn ratfunc<R: Rng + ?Sized>(field: &Field, num_deg: usize, den_deg: usize, rng: &mut R) -> RatFunc {
    let num = poly(field, num_deg, rng);
    let d = rng.gen_range(0..=den_deg);
    let mut cs: Vec<_> = (0..d).map(|_| field.random(rng)).collect();
    cs.push(field.one());
    let den = Poly::from_coeffs(field, &cs).expect("same field");
    RatFunc::new(num, den).expect("monic denominator")
}

/// t^v * (unit / unit), so the t-adic valuation is exactly v.
pub fn ratfunc_with_valuation<R: Rng + ?Sized>(field: &Field, v: i64, max_deg: usize, rng: &mut R) -> RatFunc {
    let num = unit_poly(field, max_deg, rng);
    let den = unit_poly(field, rng.gen_range(0..=max_deg), rng);
    let u = RatFunc::new(num, den).expect("nonzero denominator");
    u.mul(&RatFunc::monomial(&field.one(), v)).expect("same field")
}

/// A series of exact valuation `v` with random coefficients up to O(t^prec).
pub fn series_with_valuation<R: Rng + ?Sized>(field: &Field, v: i64, prec: i64, rng: &mut R) -> LaurentSeries {
    let len = (prec - v).max(0) as usize;
    let mut cs: Vec<_> = (0..len).map(|_| field.random(rng)).collect();
    if let Some(c) = cs.first_mut() {
        *c = field.random_nonzero(rng);
    }
    LaurentSeries::from_coeffs(field, v, &cs, prec).expect("same field")
}

/// An element of the maximal ideal (valuation between 1 and 4).
pub fn maximal_ideal_series<R: Rng + ?Sized>(field: &Field, prec: i64, rng: &mut R) -> LaurentSeries {
    let v = rng.gen_range(1..=4.min(prec - 1).max(1));
    series_with_valuation(field, v, prec, rng)
}
