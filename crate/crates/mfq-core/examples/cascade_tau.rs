//! Minimal library walkthrough: build a cascade state, fit its correlation
//! exponent from the wavelet partition function, and compare with the
//! closed form.
//!
//! ```sh
//! cargo run -p mfq-core --example cascade_tau
//! ```

use mfq_core::{
    cascade_state, cascade_tau_analytic, default_fit_window, fit_tau, partition_density,
    CascadeParams, WaveletFilter,
};

fn main() -> Result<(), mfq_core::Error> {
    let params = CascadeParams::new(14, 0.3)?;
    let psi = cascade_state(&params)?;
    let filter = WaveletFilter::daubechies4();
    let table = partition_density(&psi, &filter, 2.0)?;
    let fit = fit_tau(&table, 2.0, default_fit_window(14))?;
    println!(
        "tau_2 = {:.6} ± {:.6}   (exact: {:.6})",
        fit.tau,
        fit.stderr,
        cascade_tau_analytic(2.0, 0.3),
    );
    Ok(())
}
