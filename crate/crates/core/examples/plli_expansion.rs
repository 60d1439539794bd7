//! Expansion of two tube frames that cross at the origin of a slowly
//! expanding Friedmann model.

use framekin::equivalence::plli_expansion_pair;

fn main() -> framekin::Result<()> {
    let a = 1e-3;
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "v", "theta_L", "theta_L'", "raw theta_L'", "theta_L'/av^2");
    for v in [0.05, 0.1, 0.2] {
        let r = plli_expansion_pair(a, v)?;
        println!(
            "{v:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            r.theta_l,
            r.theta_lprime,
            r.lprime.raw,
            r.ratio_to_av2.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
