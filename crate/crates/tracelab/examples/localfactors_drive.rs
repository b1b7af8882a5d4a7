//! Drives the finite-place layer through the public API: conductor products,
//! resolvent factors, and the residue identity closed-form vs contour.

use tracelab::localfactors::{
    b_factor, local_l, local_zeta, mvt_l2_closed, mvt_l2_contour, s_q, ContourSpec,
    SpectralData,
};
use tracelab::{Cplx, PrecisionContext};

fn main() {
    let ctx = PrecisionContext::new(30, 1e-22).unwrap();

    // Local factors at rational points.
    let z2 = local_zeta(&ctx, 2, &Cplx::from_i64(&ctx, 1)).unwrap();
    println!("zeta_2(1)            = {:?} (expect 2)", z2);
    let l5 = local_l(&ctx, 5, &Cplx::from_i64(&ctx, 0), -1).unwrap();
    println!("L_5(0, chi=-1)       = {:?} (expect 0.5)", l5);
    println!("zeta_5(0)            -> {}", local_zeta(&ctx, 5, &Cplx::from_i64(&ctx, 0)).unwrap_err());

    // Conductor product on the Eisenstein diagonal.
    let one = Cplx::from_i64(&ctx, 1);
    let spec = SpectralData::eisenstein(&ctx, &one, &[2, 3, 5]).unwrap();
    let b = b_factor(&ctx, &spec, -16).unwrap();
    println!("B(1; -16)            = {:?} (expect 3)", b);
    let b = b_factor(&ctx, &spec, -3).unwrap();
    println!("B(1; -3)             = {:?} (expect 1, empty product)", b);
    let b = b_factor(&ctx, &spec, 9).unwrap();
    println!("B(1; 9) square Delta = {:?}", b);

    // Hecke eigenvalue to spectral parameter and back.
    let mut data = SpectralData::new(Cplx::i(&ctx));
    data.set_hecke(&ctx, 2, &ctx.real_ratio(5, 2)).unwrap();
    println!("nu_2(lambda=5/2)     = {:?} (expect 2)", data.nu(2).unwrap());

    // Resolvent factor and its strip guard.
    let z = Cplx::i(&ctx);
    let s = Cplx::from_real(ctx.real_from_f64(1.5));
    let v = s_q(&ctx, 2, -4, &z, &s, 1).unwrap();
    println!("S_2^{{-4,(i)}}(3/2;a)  = {:?}", v);
    let bad = Cplx::from_real(ctx.real_from_f64(-0.8));
    println!("strip violation      -> {}", s_q(&ctx, 2, -4, &z, &bad, 1).unwrap_err());

    // Residue identity: closed form against the contour route.
    let c = ctx.real(2);
    for (m, ord) in [(0u32, 0i64), (2, 0), (1, 1), (2, -2)] {
        let closed = mvt_l2_closed(&ctx, 2, &z, -4, m, ord).unwrap();
        let (contour, est) = mvt_l2_contour(&ctx, 2, &z, -4, m, ord, &c).unwrap();
        let diff = (&closed - &contour).abs();
        println!(
            "m={m} ord={ord:2}: |closed - contour| = {:8.2e}  (est {:8.2e})",
            diff.to_f64(),
            est.to_f64()
        );
    }

    // Contour placement guard.
    let spec2 = ContourSpec::for_parameter(&ctx, 2, &Cplx::from_i64(&ctx, 4)).unwrap();
    println!("default abscissa for Re z = 4: c = {}", spec2.abscissa().to_f64());
    let err = mvt_l2_contour(&ctx, 2, &Cplx::from_i64(&ctx, 4), -4, 0, 0, &ctx.real(1)).unwrap_err();
    println!("bad abscissa         -> {err}");
}
