use serde::{Deserialize, Serialize};

use super::error::invalid;
use super::{RunSeries, StatsError};

/// Order state occupied by the mean velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Well {
    Plus,
    Minus,
}

impl Well {
    pub fn sign(self) -> f64 {
        match self {
            Well::Plus => 1.0,
            Well::Minus => -1.0,
        }
    }
}

/// One switch between order states. `time` is the moment the mean velocity
/// left the old well (crossed the exit level on the far side); `confirmed_at`
/// is when it reached the entry level of the new one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEvent {
    pub time: f64,
    pub confirmed_at: f64,
    pub from: Well,
    pub to: Well,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub count: usize,
    pub events: Vec<TransitionEvent>,
    pub xi_e: f64,
    pub enter_frac: f64,
    pub exit_frac: f64,
}

/// Hysteresis switch counter on the mean-velocity series of a run.
pub fn count_transitions(
    series: &RunSeries,
    xi_e: f64,
    enter_frac: f64,
    exit_frac: f64,
) -> Result<TransitionReport, StatsError> {
    count_transitions_in(&series.times, &series.mean_velocity, xi_e, enter_frac, exit_frac)
}

/// Hysteresis detector on raw `(t, ubar)` samples.
///
/// The series occupies `+` once `ubar >= enter_frac * xi_e` (and `-`
/// symmetrically). It leaves `+` when `ubar <= -exit_frac * xi_e`; the switch
/// counts once it then reaches `-enter_frac * xi_e`. Excursions that return to
/// the old well before confirmation are not counted.
pub fn count_transitions_in(
    times: &[f64],
    ubar: &[f64],
    xi_e: f64,
    enter_frac: f64,
    exit_frac: f64,
) -> Result<TransitionReport, StatsError> {
    if !(exit_frac > 0.0 && exit_frac < enter_frac && enter_frac <= 1.0) {
        return Err(invalid(
            "enter_frac/exit_frac",
            format!("need 0 < exit_frac < enter_frac <= 1, got enter={enter_frac}, exit={exit_frac}"),
        ));
    }
    if times.len() != ubar.len() {
        return Err(invalid("times", "times and mean velocities differ in length"));
    }
    let xi = xi_e.abs();
    if !(xi > 0.0) {
        return Err(invalid("xi_e", "order velocity must be nonzero"));
    }
    let enter = enter_frac * xi;
    let exit = exit_frac * xi;

    let mut occupied: Option<Well> = None;
    let mut left_at: Option<f64> = None;
    let mut events = Vec::new();
    for (&t, &u) in times.iter().zip(ubar) {
        let hit = if u >= enter {
            Some(Well::Plus)
        } else if u <= -enter {
            Some(Well::Minus)
        } else {
            None
        };
        match occupied {
            None => occupied = hit,
            Some(w) => {
                let far_side = -w.sign() * u;
                if far_side >= exit && left_at.is_none() {
                    left_at = Some(t);
                }
                match hit {
                    Some(h) if h != w => {
                        events.push(TransitionEvent {
                            time: left_at.unwrap_or(t),
                            confirmed_at: t,
                            from: w,
                            to: h,
                        });
                        occupied = Some(h);
                        left_at = None;
                    }
                    Some(_) => left_at = None,
                    None => {}
                }
            }
        }
    }
    Ok(TransitionReport {
        count: events.len(),
        events,
        xi_e: xi,
        enter_frac,
        exit_frac,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(u: &[f64], enter: f64) -> usize {
        let t: Vec<f64> = (0..u.len()).map(|i| i as f64).collect();
        count_transitions_in(&t, u, 2.0, enter, 0.2).unwrap().count
    }

    #[test]
    fn constant_series_has_no_transitions() {
        assert_eq!(count(&[2.0; 50], 0.8), 0);
    }

    #[test]
    fn square_wave_flips() {
        let u: Vec<f64> = (0..60).map(|i| if (i / 10) % 2 == 0 { 2.0 } else { -2.0 }).collect();
        assert_eq!(count(&u, 0.8), 5);
    }

    #[test]
    fn failed_excursion_not_counted() {
        let u = [2.0, 1.0, -1.0, -1.5, 0.5, 2.0, -1.5, 2.0];
        assert_eq!(count(&u, 0.8), 0);
        let u = [2.0, -1.0, -1.7, 2.0];
        assert_eq!(count(&u, 0.8), 2);
    }

    #[test]
    fn events_alternate_and_record_departure() {
        let u = [0.0, 2.0, 1.0, -0.5, -1.0, -1.8, -2.0, 1.0, 1.9];
        let t: Vec<f64> = (0..u.len()).map(|i| i as f64).collect();
        let r = count_transitions_in(&t, &u, 2.0, 0.8, 0.2).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.events[0].from, Well::Plus);
        assert_eq!(r.events[0].time, 3.0);
        assert_eq!(r.events[0].confirmed_at, 5.0);
        assert_eq!(r.events[1].to, Well::Plus);
    }

    #[test]
    fn rejects_bad_thresholds() {
        assert!(count_transitions_in(&[0.0], &[0.0], 2.0, 0.2, 0.8).is_err());
        assert!(count_transitions_in(&[0.0], &[0.0], 2.0, 1.2, 0.2).is_err());
        assert!(count_transitions_in(&[0.0], &[0.0], 2.0, 0.8, 0.0).is_err());
    }
}
