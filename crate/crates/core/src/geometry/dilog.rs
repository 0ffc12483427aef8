//! Principal-branch dilogarithm on the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `B_{2k} / (2k + 1)!` for k = 1..=12.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    2.777_777_777_777_778e-2,
    -2.777_777_777_777_778e-4,
    4.724_111_866_969_009e-6,
    -9.185_773_074_661_963e-8,
    1.897_886_998_897_100_3e-9,
    -4.064_761_645_144_226e-11,
    8.921_691_020_456_453e-13,
    -1.993_929_586_072_107_6e-14,
    4.518_980_029_619_918e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_687_759_737_012_6e-19,
    -5.587_065_048_083_446e-21,
];

/// `Li₂(z) = -∫₀^z log(1 - u)/u du`, cut along `[1, ∞)`.
pub fn li2(z: Complex64) -> Complex64 {
    let pi2_6 = PI * PI / 6.0;
    if z.re == 1.0 && z.im == 0.0 {
        return Complex64::new(pi2_6, 0.0);
    }
    if z.norm_sqr() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        return -li2_unit_disk(z.inv()) - pi2_6 - 0.5 * l * l;
    }
    li2_unit_disk(z)
}

fn li2_unit_disk(z: Complex64) -> Complex64 {
    if z.re > 0.5 {
        let w = Complex64::new(1.0, 0.0) - z;
        if w.norm_sqr() == 0.0 {
            return Complex64::new(PI * PI / 6.0, 0.0);
        }
        return -bernoulli_series(w) + PI * PI / 6.0 - z.ln() * w.ln();
    }
    bernoulli_series(z)
}

/// Series in `u = -log(1 - z)`, valid for `|u| < 2π`.
fn bernoulli_series(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut power = u * u2;
    for b in BERNOULLI_OVER_FACTORIAL {
        sum += b * power;
        power *= u2;
    }
    sum
}
