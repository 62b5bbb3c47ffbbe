//! Closed-form algebra for 2x2 Hermitian matrices.

use num_complex::Complex64;

/// Two complex amplitudes in the `{|alpha>, |beta>}` basis.
pub type Amplitudes = [Complex64; 2];

/// `[[d0, off], [conj(off), d1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian2 {
    pub d0: f64,
    pub d1: f64,
    pub off: Complex64,
}

/// Eigenpairs of a [`Hermitian2`], lower level first.
#[derive(Debug, Clone, Copy)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [Amplitudes; 2],
}

impl Hermitian2 {
    pub fn real(d0: f64, d1: f64, off: f64) -> Self {
        Self {
            d0,
            d1,
            off: Complex64::new(off, 0.0),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            d0: k * self.d0,
            d1: k * self.d1,
            off: self.off * k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            d0: self.d0 + other.d0,
            d1: self.d1 + other.d1,
            off: self.off + other.off,
        }
    }

    pub fn trace(&self) -> f64 {
        self.d0 + self.d1
    }

    /// Half the level splitting, `sqrt(((d0 - d1)/2)^2 + |off|^2)`.
    pub fn half_splitting(&self) -> f64 {
        (0.5 * (self.d0 - self.d1)).hypot(self.off.norm())
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * self.trace();
        let r = self.half_splitting();
        [mean - r, mean + r]
    }

    /// Eigen-decomposition via the Bloch angle of the traceless part.
    ///
    /// With `theta = atan2(|off|, (d0 - d1)/2)` and `phi = arg(off)` the
    /// ground vector is `(-sin(theta/2) e^{i phi}, cos(theta/2))`. At zero
    /// splitting the basis vectors are returned in order.
    pub fn eigen(&self) -> Eigen2 {
        let theta = self.off.norm().atan2(0.5 * (self.d0 - self.d1));
        let phase = Complex64::from_polar(1.0, self.off.arg());
        let (sin, cos) = (0.5 * theta).sin_cos();
        Eigen2 {
            values: self.eigenvalues(),
            vectors: [
                [-phase * sin, Complex64::new(cos, 0.0)],
                [phase * cos, Complex64::new(sin, 0.0)],
            ],
        }
    }

    pub fn apply(&self, v: &Amplitudes) -> Amplitudes {
        [
            v[0] * self.d0 + self.off * v[1],
            self.off.conj() * v[0] + v[1] * self.d1,
        ]
    }

    /// `<u| H |v>`.
    pub fn matrix_element(&self, u: &Amplitudes, v: &Amplitudes) -> Complex64 {
        let hv = self.apply(v);
        u[0].conj() * hv[0] + u[1].conj() * hv[1]
    }

    /// `exp(-i H dt)` as `e^{-i m dt} (cos(r dt) I - i sin(r dt) (H - m)/r)`.
    pub fn propagator(&self, dt: f64) -> Unitary2 {
        let mean = 0.5 * self.trace();
        let r = self.half_splitting();
        let global = Complex64::from_polar(1.0, -mean * dt);
        let (sin, cos) = (r * dt).sin_cos();
        // sin(r dt)/r, finite as r -> 0
        let sinc = if r == 0.0 { dt } else { sin / r };
        let i = Complex64::i();
        let half = 0.5 * (self.d0 - self.d1);
        Unitary2([
            [global * (cos - i * (sinc * half)), global * (-i * sinc) * self.off],
            [
                global * (-i * sinc) * self.off.conj(),
                global * (cos + i * (sinc * half)),
            ],
        ])
    }
}

/// A 2x2 unitary, row-major.
#[derive(Debug, Clone, Copy)]
pub struct Unitary2(pub [[Complex64; 2]; 2]);

impl Unitary2 {
    pub fn apply(&self, v: &Amplitudes) -> Amplitudes {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

pub fn norm_sqr(v: &Amplitudes) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        let cases = [
            Hermitian2::real(1.0, -2.0, 0.5),
            Hermitian2::real(-1.0, 3.0, -2.0),
            Hermitian2 {
                d0: 0.3,
                d1: 0.3,
                off: Complex64::new(0.2, -0.7),
            },
            Hermitian2::real(2.0, 1.0, 0.0),
            Hermitian2::real(1.0, 2.0, 0.0),
        ];
        for h in cases {
            let eig = h.eigen();
            assert!(eig.values[0] <= eig.values[1]);
            for k in 0..2 {
                let v = eig.vectors[k];
                assert!((norm_sqr(&v) - 1.0).abs() < 1e-14);
                let hv = h.apply(&v);
                for c in 0..2 {
                    assert!(close(hv[c], v[c] * eig.values[k], 1e-13), "{h:?} level {k}");
                }
            }
            assert!(h.matrix_element(&eig.vectors[1], &eig.vectors[0]).norm() < 1e-13);
        }
    }

    #[test]
    fn propagator_is_unitary_and_matches_eigenbasis() {
        let h = Hermitian2 {
            d0: 0.9,
            d1: -0.4,
            off: Complex64::new(0.3, 0.8),
        };
        let dt = 0.37;
        let u = h.propagator(dt);
        let eig = h.eigen();
        for k in 0..2 {
            let v = eig.vectors[k];
            let uv = u.apply(&v);
            let phase = Complex64::from_polar(1.0, -eig.values[k] * dt);
            for c in 0..2 {
                assert!(close(uv[c], v[c] * phase, 1e-14));
            }
        }
        let m = &u.0;
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let dot = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
            let want = if i == j { 1.0 } else { 0.0 };
            assert!(close(dot, Complex64::new(want, 0.0), 1e-15));
        }
    }

    #[test]
    fn propagator_of_scalar_is_phase() {
        let u = Hermitian2::real(2.0, 2.0, 0.0).propagator(0.5);
        let phase = Complex64::from_polar(1.0, -1.0);
        assert!(close(u.0[0][0], phase, 1e-15));
        assert!(close(u.0[1][1], phase, 1e-15));
        assert_eq!(u.0[0][1], Complex64::new(0.0, 0.0));
    }
}
