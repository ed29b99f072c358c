//! The Maurer-Cartan elements and the sensitivity of the check.

use graphcx::graphcore::{int, Family};
use graphcx::liealg::{corolla_coeff, verify_mc, McElement};

fn main() {
    for d in 1..=3 {
        println!("gamma0 in GC_{d}: {}", verify_mc(&McElement::gamma0(Family::Gc, d)));
    }
    for d in 0..=3 {
        let coeffs: Vec<String> = (1..=4).map(|k| corolla_coeff(d, k).to_string()).collect();
        let good = verify_mc(&McElement::gamma_hat(d, 6));
        let bad = McElement::gamma_hat_with(d, 6, |k| if k == 2 { int(1) } else { corolla_coeff(d, k) });
        println!(
            "gammaHat d={d} corolla coefficients [{}]: [gamma, gamma] = 0 up to 6 vertices: {good}; with c_2 = 1: {}",
            coeffs.join(", "),
            verify_mc(&bad)
        );
    }
}
