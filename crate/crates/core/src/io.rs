//! JSON schemas shared with the command-line front end, and the number
//! format used for every serialized float (17 significant digits, so values
//! survive a write/read cycle bit for bit).

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::geometry::{Polygon, UnitVector2};
use crate::measure::{Atom, Density, DiscreteMeasure, MeasureSpec};

/// `x` in scientific notation with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty printer that writes floats through [`format_f64`].
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with 17-digit floats and a trailing newline. Non-finite
/// floats become `null`.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Parses `text`, naming the offending field on schema violations.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::InvalidInput(format!("at `{path}`: {}", e.into_inner()))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub theta: Vec<f64>,
    pub f: Vec<f64>,
}

/// `{"atoms": [{"theta", "mass"}...], "density": {"theta": [...], "f": [...]}}`;
/// both parts are optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityJson>,
}

impl MeasureJson {
    pub fn to_spec(&self) -> Result<MeasureSpec> {
        let density = match &self.density {
            Some(d) => Some(Density::new(&d.theta, &d.f)?),
            None => None,
        };
        MeasureSpec::new(self.atoms.clone(), density)
    }
}

impl From<&MeasureSpec> for MeasureJson {
    fn from(mu: &MeasureSpec) -> Self {
        MeasureJson {
            atoms: mu.atoms().to_vec(),
            density: mu.density().map(|d| {
                let (theta, f) = d.samples();
                DensityJson {
                    theta: theta.to_vec(),
                    f: f.to_vec(),
                }
            }),
        }
    }
}

impl From<&DiscreteMeasure> for MeasureJson {
    fn from(mu: &DiscreteMeasure) -> Self {
        MeasureJson {
            atoms: mu.atoms().to_vec(),
            density: None,
        }
    }
}

/// A polygon by outer normal angles and support numbers. `vertices` is
/// written for convenience and ignored on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonJson {
    #[serde(rename = "normals_theta")]
    pub theta: Vec<f64>,
    pub support: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonJson {
    pub fn to_polygon(&self) -> Result<Polygon> {
        if self.theta.len() != self.support.len() {
            return Err(Error::InvalidInput(format!(
                "polygon: {} normals but {} support numbers",
                self.theta.len(),
                self.support.len()
            )));
        }
        let normals: Vec<UnitVector2> = self.theta.iter().map(|&t| UnitVector2::new(t)).collect();
        Polygon::from_support(&normals, &self.support)
    }
}

impl From<&Polygon> for PolygonJson {
    fn from(poly: &Polygon) -> Self {
        PolygonJson {
            theta: poly.normals().iter().map(|u| u.theta()).collect(),
            support: poly.support().to_vec(),
            vertices: poly.vertices().iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

pub fn read_measure(text: &str) -> Result<MeasureSpec> {
    from_json_str::<MeasureJson>(text)?.to_spec()
}

pub fn read_polygon(text: &str) -> Result<Polygon> {
    from_json_str::<PolygonJson>(text)?.to_polygon()
}
