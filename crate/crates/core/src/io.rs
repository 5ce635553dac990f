//! CSV formats for tension curves and sampled energies.

use std::io::{Read, Write};
use std::path::Path;

use crate::constitutive::{MicroEnergySamples, TensionCurve};
use crate::error::{Error, Result};

pub const CURVE_HEADER: [&str; 2] = ["strain", "tension_n"];
pub const ENERGY_HEADER: [&str; 2] = ["strain", "energy_n"];
pub const ENVELOPE_HEADER: [&str; 3] = ["strain", "energy_n", "envelope_n"];

fn read_pairs<R: Read>(input: R, header: [&str; 2], what: &str) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::InvalidSamples(format!(
            "{what}: expected header `{}`, found `{}`",
            header.join(","),
            found.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in r.deserialize::<(f64, f64)>().enumerate() {
        let row = rec.map_err(|e| {
            Error::InvalidSamples(format!("{what}: line {}: {e}", i + 2))
        })?;
        out.push(row);
    }
    Ok(out)
}

pub fn read_curve<R: Read>(input: R) -> Result<TensionCurve> {
    let knots = read_pairs(input, CURVE_HEADER, "tension curve")?;
    TensionCurve::new(knots)
}

pub fn read_curve_file(path: impl AsRef<Path>) -> Result<TensionCurve> {
    let path = path.as_ref();
    let f = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    read_curve(f)
}

/// Writes knots with shortest round-trip formatting, so reading them back
/// reproduces the curve bit for bit.
pub fn write_curve<W: Write>(curve: &TensionCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for &(e, b) in curve.knots() {
        w.write_record([e.to_string(), b.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_file(curve: &TensionCurve, path: impl AsRef<Path>) -> Result<()> {
    write_curve(curve, std::fs::File::create(path)?)
}

pub fn read_energy_samples<R: Read>(input: R) -> Result<MicroEnergySamples> {
    MicroEnergySamples::new(read_pairs(input, ENERGY_HEADER, "energy samples")?)
}

pub fn read_energy_file(path: impl AsRef<Path>) -> Result<MicroEnergySamples> {
    let path = path.as_ref();
    let f = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    read_energy_samples(f)
}

pub fn write_envelope<W: Write>(samples: &MicroEnergySamples, envelope: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ENVELOPE_HEADER)?;
    for (&(e, v), env) in samples.points().iter().zip(envelope) {
        w.write_record([e.to_string(), v.to_string(), env.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_round_trip_is_exact() {
        let c = TensionCurve::new(vec![(0.0, 0.0), (0.1 / 3.0, 1234.5678901234), (0.2, 4e3)]).unwrap();
        let mut buf = Vec::new();
        write_curve(&c, &mut buf).unwrap();
        assert_eq!(read_curve(&buf[..]).unwrap(), c);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let text = "eps,b\n0,0\n0.1,10\n";
        assert!(matches!(read_curve(text.as_bytes()), Err(Error::InvalidSamples(_))));
    }

    #[test]
    fn unsorted_energy_is_rejected() {
        let text = "strain,energy_n\n0.1,1\n0.0,0\n0.2,3\n";
        assert!(read_energy_samples(text.as_bytes()).is_err());
    }

    #[test]
    fn bad_number_names_the_line() {
        let text = "strain,tension_n\n0,0\n0.1,abc\n";
        let err = read_curve(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
