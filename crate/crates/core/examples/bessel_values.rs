//! Exponentially scaled modified Bessel functions and the ratio bounds used
//! for the annulus estimates.

use pde_thickness::bessel::{self, BesselKind, BesselOrder, ScaledBessel};

fn main() -> pde_thickness::Result<()> {
    println!("{:>8} {:>22} {:>22} {:>22} {:>22}", "x", "e^-x I0", "e^-x I1", "e^x K0", "e^x K1");
    for x in [1e-3, 0.5, 1.0, 8.0, 50.0, 1e3] {
        let (k0, k1) = bessel::k01e(x);
        println!("{x:>8} {:>22.15e} {:>22.15e} {k0:>22.15e} {k1:>22.15e}", bessel::i0e(x), bessel::i1e(x));
    }

    let k1 = ScaledBessel::new(BesselKind::K, BesselOrder::One, 1.0)?;
    println!("\nK1(1) = {} (scaled {})", k1.unscaled(), k1.scaled_value);

    for x in [0.01, 1.0, 100.0] {
        let (k0, k1) = bessel::k01e(x);
        let c = bessel::check_ratio_inequalities(x)?;
        println!(
            "x = {x:<6} K0/K1 = {:.12} >= {:.12}  I0/I1 = {:.12} <= {:.12}  all hold: {}",
            k0 / k1,
            bessel::k_ratio_lower_bound(x),
            bessel::i0e(x) / bessel::i1e(x),
            bessel::i_ratio_upper_bound(x),
            c.all()
        );
    }
    Ok(())
}
