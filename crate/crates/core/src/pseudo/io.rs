//! Text serialisation of pseudotrajectories.
//!
//! ```text
//! period,defect,kind,parameters
//! 8,0.01,jordan-staircase-2,d=0.01;K=2;Y=4;Z1=1;Z2=4;phases=2 2 4
//! x0,x1
//! 0,0
//! ...
//! ```
//!
//! Floats use the shortest representation that parses back to the same
//! value, so a write/read cycle is bit-exact.

use super::{PeriodicPseudotrajectory, PseudoError, WitnessMeta};
use crate::systems::{DiscreteSystem, Point};

/// Relative mismatch tolerated between the stored and the recomputed defect.
const DEFECT_TOLERANCE: f64 = 1e-9;

pub fn write_csv(pseudo: &PeriodicPseudotrajectory, meta: &WitnessMeta) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    let fail = "writing to memory";
    w.write_record(["period", "defect", "kind", "parameters"])
        .expect(fail);
    w.write_record([
        pseudo.period().to_string(),
        pseudo.defect().to_string(),
        meta.kind.to_string(),
        meta.parameter_string(),
    ])
    .expect(fail);
    let n = pseudo.points().first().map_or(0, |p| p.len());
    w.write_record((0..n).map(|i| format!("x{i}"))).expect(fail);
    for p in pseudo.points() {
        w.write_record(p.iter().map(|v| v.to_string())).expect(fail);
    }
    String::from_utf8(w.into_inner().expect(fail)).expect("csv output is utf-8")
}

/// Parses the format written by [`write_csv`] and re-measures the defect
/// against `sys`.
pub fn read_csv<S: DiscreteSystem + ?Sized>(
    sys: &S,
    text: &str,
) -> Result<(PeriodicPseudotrajectory, WitnessMeta), PseudoError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = r.records();
    let mut next = |what: &str| -> Result<csv::StringRecord, PseudoError> {
        records
            .next()
            .ok_or_else(|| PseudoError::Format(format!("missing {what} row")))?
            .map_err(|e| PseudoError::Format(e.to_string()))
    };
    let header = next("header")?;
    if header.iter().collect::<Vec<_>>() != ["period", "defect", "kind", "parameters"] {
        return Err(PseudoError::Format("unexpected header row".into()));
    }
    let values = next("summary")?;
    if values.len() != 4 {
        return Err(PseudoError::Format("summary row needs four fields".into()));
    }
    let period: usize = values[0]
        .parse()
        .map_err(|_| PseudoError::Format(format!("invalid period `{}`", &values[0])))?;
    let stored_defect: f64 = values[1]
        .parse()
        .map_err(|_| PseudoError::Format(format!("invalid defect `{}`", &values[1])))?;
    let kind = values[2].parse()?;
    let meta = WitnessMeta::parse_parameters(kind, period, &values[3])?;

    let columns = next("coordinate header")?;
    let n = columns.len();
    let mut points = Vec::with_capacity(period);
    for (line, row) in records.enumerate() {
        let row = row.map_err(|e| PseudoError::Format(e.to_string()))?;
        if row.len() != n {
            return Err(PseudoError::Format(format!(
                "point {line} has {} coordinates, expected {n}",
                row.len()
            )));
        }
        let coords: Vec<f64> = row
            .iter()
            .map(|v| {
                v.parse()
                    .map_err(|_| PseudoError::Format(format!("invalid number `{v}`")))
            })
            .collect::<Result<_, _>>()?;
        points.push(Point::from_vec(coords));
    }
    if points.len() != period {
        return Err(PseudoError::Format(format!(
            "header declares {period} points, found {}",
            points.len()
        )));
    }
    let pseudo = PeriodicPseudotrajectory::measure(sys, points)?;
    if (pseudo.defect() - stored_defect).abs() > DEFECT_TOLERANCE * stored_defect.abs() {
        return Err(PseudoError::Format(format!(
            "stored defect {stored_defect} does not match recomputed {}",
            pseudo.defect()
        )));
    }
    Ok((pseudo, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::{perturb_orbit, witness_jordan, WitnessKind};
    use crate::systems::{JordanBlock, JordanModel, ToralAutomorphism};

    #[test]
    fn jordan_witness_round_trip() {
        let m = JordanModel::new(
            JordanBlock::Real {
                size: 2,
                eigenvalue: 1.0,
            },
            vec![2.0],
        )
        .unwrap()
        .with_nonlinearity(0.0);
        let w = witness_jordan(&m, 1e-3, 3).unwrap();
        let text = write_csv(&w.pseudo, &w.meta);
        let (back, meta) = read_csv(&m, &text).unwrap();
        assert_eq!(back, w.pseudo);
        assert_eq!(meta, w.meta);
        assert!(text.starts_with("period,defect,kind,parameters\n15,"));
    }

    #[test]
    fn random_points_round_trip_bitwise() {
        let cat = ToralAutomorphism::cat_map();
        let x = perturb_orbit(&cat, &vec![Point::from_row_slice(&[0.2, 0.4]); 3], 1e-3, 5).unwrap();
        let meta = WitnessMeta::new(WitnessKind::Custom, 3);
        let (back, _) = read_csv(&cat, &write_csv(&x, &meta)).unwrap();
        for (a, b) in back.points().iter().zip(x.points()) {
            for (u, v) in a.iter().zip(b.iter()) {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
    }

    #[test]
    fn tampered_defect_is_rejected() {
        let cat = ToralAutomorphism::cat_map();
        let text = "period,defect,kind,parameters\n1,0.5,custom,\nx0,x1\n0.1,0.2\n";
        assert!(matches!(read_csv(&cat, text), Err(PseudoError::Format(_))));
    }
}
