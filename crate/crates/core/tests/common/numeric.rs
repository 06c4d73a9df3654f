//! Floating-point evaluation of cyclotomic values, used as an independent
//! check on exact character arithmetic.

use bredon_core::cyclo::Cyclo;
use bredon_core::groups::Group;

#[derive(Clone, Copy, Debug)]
pub struct C(pub f64, pub f64);

impl C {
    pub fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn conj(self) -> C {
        C(self.0, -self.1)
    }
    pub fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    pub fn near(self, re: f64, im: f64) -> bool {
        (self.0 - re).abs() < 1e-9 && (self.1 - im).abs() < 1e-9
    }
}

pub fn eval(z: &Cyclo) -> C {
    let n = z.order() as f64;
    z.coeffs().iter().enumerate().fold(C(0.0, 0.0), |acc, (k, &c)| {
        let t = std::f64::consts::TAU * k as f64 / n;
        acc.add(C(c as f64 * t.cos(), c as f64 * t.sin()))
    })
}

/// Conjugacy classes of the subgroup `elems`, from the multiplication table.
pub fn classes(g: &Group, elems: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &x in elems {
        if seen.contains(&x) {
            continue;
        }
        let c: std::collections::BTreeSet<usize> =
            elems.iter().map(|&h| g.mul(g.mul(h, x), g.inv(h))).collect();
        seen.extend(c.iter().copied());
        out.push(c.into_iter().collect());
    }
    out
}
