//! d(Γ) > c·ℓ(Γ): c = 8 proven, c = 1/2 conjectural.

use serde::Serialize;

use super::{Entry, Verdict, STRICT_MARGIN};
use crate::contour::{contour_diameter, contour_length, Contour};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Proven,
    Conjectural,
}

impl Mode {
    pub fn factor(self) -> f64 {
        match self {
            Mode::Proven => 8.0,
            Mode::Conjectural => 0.5,
        }
    }
}

pub fn diameter_length_check(c: &Contour, mode: Mode) -> Entry {
    let d = contour_diameter(c);
    let l = contour_length(c);
    diameter_length_from(d, l, mode)
}

pub(crate) fn diameter_length_from(d: f64, l: f64, mode: Mode) -> Entry {
    let margin = d - mode.factor() * l;
    let name = match mode {
        Mode::Proven => "diameter-length",
        Mode::Conjectural => "diameter-length-conjectural",
    };
    let mut e = Entry::new(name, mode == Mode::Proven);
    e.verdict = if margin > STRICT_MARGIN * d { Verdict::Certified } else { Verdict::NotTriggered };
    e.margin = Some(margin);
    e.measure("d", d);
    e.measure("l", l);
    e.measure("factor", mode.factor());
    if mode == Mode::Conjectural {
        e.note("non-rigorous: conjectured factor 1/2");
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{circle, sphere_circles, stadium, SphericalPointSet};
    use crate::contour::P3;

    #[test]
    fn antipodal_small_circles_fire() {
        let x = SphericalPointSet::new(vec![P3::z(), -P3::z()]).unwrap();
        let c = sphere_circles(&x, 0.01, 128).unwrap();
        let e = diameter_length_check(&c, Mode::Proven);
        assert_eq!(e.verdict, Verdict::Certified);
        let l = e.get("l").unwrap();
        let polygon = 2.0 * 128.0 * 2.0 * 0.01f64.sin() * (std::f64::consts::PI / 128.0).sin();
        assert!((l - polygon).abs() < 1e-12);
        assert!((e.get("d").unwrap() - 2.0).abs() < 1e-12);
        assert!(e.margin.unwrap() > 0.9);
    }

    #[test]
    fn stadium_and_circle_stay_silent() {
        let e = diameter_length_check(&stadium(10.0, 1.0, 128).unwrap(), Mode::Proven);
        assert_eq!(e.verdict, Verdict::NotTriggered);
        let c = Contour::new(vec![circle(&P3::zeros(), &P3::z(), 1.0, 256)]).unwrap();
        assert_eq!(diameter_length_check(&c, Mode::Proven).verdict, Verdict::NotTriggered);
        assert_eq!(diameter_length_check(&c, Mode::Conjectural).verdict, Verdict::NotTriggered);
    }

    #[test]
    fn conjectural_is_not_rigorous() {
        let c = stadium(10.0, 1.0, 64).unwrap();
        let e = diameter_length_check(&c, Mode::Conjectural);
        assert!(!e.rigorous);
    }
}
