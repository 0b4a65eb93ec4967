use dispersive_lab::norms::{dual, fourier_lebesgue_norm, lebesgue_norm, FourierLebesgueSpec};
use dispersive_lab::spectral::{SampledField, SpaceGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn gaussian(sigma: f64) -> SampledField {
    let grid = SpaceGrid::new(80.0, 1024).unwrap();
    SampledField::from_fn(grid, |x| Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0)).unwrap()
}

#[test]
fn dual_exponents() {
    assert_eq!(dual(2.0), 2.0);
    assert!((dual(1.5) - 3.0).abs() < 1e-12);
    assert!((dual(4.0) - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn fourier_lebesgue_norm_of_a_gaussian() {
    // F of e^{-x^2/2} is sqrt(2 pi) e^{-xi^2/2}; its L^{r'} norm is sqrt(2 pi) (2 pi / r')^{1/(2r')}.
    let u = gaussian(1.0);
    for r in [1.25, 1.5, 2.0, 4.0] {
        let rd = dual(r);
        let exact = (2.0 * std::f64::consts::PI).sqrt() * (2.0 * std::f64::consts::PI / rd).powf(0.5 / rd);
        let got = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(0.0, r).unwrap()).unwrap();
        assert!((got / exact - 1.0).abs() < 1e-10, "r = {r}: {got} vs {exact}");
    }
}

#[test]
fn invalid_exponents_are_rejected() {
    assert!(FourierLebesgueSpec::new(0.0, 1.0).is_err());
    assert!(FourierLebesgueSpec::new(f64::NAN, 2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sobolev_weight_is_monotone_in_s(sigma in 0.5f64..3.0, s in 0.0f64..1.5) {
        let u = gaussian(sigma);
        let a = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(s, 2.0).unwrap()).unwrap();
        let b = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(s + 0.25, 2.0).unwrap()).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn plancherel_links_h0_and_l2(sigma in 0.5f64..3.0) {
        let u = gaussian(sigma);
        let h0 = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(0.0, 2.0).unwrap()).unwrap();
        let l2 = lebesgue_norm(&u, 2.0).unwrap();
        prop_assert!((h0 / l2 - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
    }
}
