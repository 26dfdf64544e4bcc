//! Complex gamma function (Lanczos, g = 7, 9 terms) with reflection.

use std::f64::consts::PI;

use crate::linalg::C64;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        return PI / ((z * PI).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (k, ck) in COEF.iter().enumerate().skip(1) {
        x += ck / (z + k as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// 1/Gamma, zero at the poles.
pub fn rgamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(0.0, 0.0);
    }
    gamma(z).inv()
}
