//! City-file exchange format (`fairnav-city/1`, UTF-8 JSON).

use super::{Attribute, Cell, CityMap, Coord};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const CITY_FORMAT: &str = "fairnav-city/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CityFile {
    format: String,
    width: usize,
    height: usize,
    base: Coord,
    attributes: Vec<Attribute>,
    cells: Vec<CellFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    regions: Option<BTreeMap<String, Vec<Coord>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    traversable: bool,
    // Signed so that negative counts surface as validation errors rather
    // than opaque parse failures. An omitted attribute means zero people.
    #[serde(default)]
    counts: BTreeMap<String, Vec<i64>>,
}

/// Parse and validate a city file.
pub fn load_city(source: &[u8]) -> Result<CityMap> {
    let de = &mut serde_json::Deserializer::from_slice(source);
    let file: CityFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        Error::parse(field, e.into_inner().to_string())
    })?;

    if file.format != CITY_FORMAT {
        return Err(Error::parse(
            "format",
            format!("expected `{CITY_FORMAT}`, got `{}`", file.format),
        ));
    }
    if file.cells.len() != file.width * file.height {
        return Err(Error::parse(
            "cells",
            format!(
                "expected {} cells for a {}x{} grid, got {}",
                file.width * file.height,
                file.width,
                file.height,
                file.cells.len()
            ),
        ));
    }

    let mut cells = Vec::with_capacity(file.cells.len());
    for (i, cell) in file.cells.into_iter().enumerate() {
        for key in cell.counts.keys() {
            if !file.attributes.iter().any(|a| &a.name == key) {
                return Err(Error::parse(
                    format!("cells[{i}].counts.{key}"),
                    "not a declared attribute",
                ));
            }
        }
        let mut counts = Vec::with_capacity(file.attributes.len());
        for attribute in &file.attributes {
            let row = match cell.counts.get(&attribute.name) {
                None => vec![0; attribute.len()],
                Some(raw) => {
                    if raw.len() != attribute.len() {
                        return Err(Error::parse(
                            format!("cells[{i}].counts.{}", attribute.name),
                            format!("expected {} counts, got {}", attribute.len(), raw.len()),
                        ));
                    }
                    raw.iter()
                        .map(|&n| {
                            u64::try_from(n).map_err(|_| {
                                Error::Validation(format!(
                                    "cells[{i}].counts.{}: negative count {n}",
                                    attribute.name
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            counts.push(row);
        }
        cells.push(Cell {
            traversable: cell.traversable,
            counts,
        });
    }

    CityMap::new(
        file.width,
        file.height,
        cells,
        file.base,
        file.attributes,
        file.regions,
    )
}

/// Serialize a map to its canonical city-file bytes.
pub fn save_city(map: &CityMap) -> Vec<u8> {
    let file = CityFile {
        format: CITY_FORMAT.to_string(),
        width: map.width(),
        height: map.height(),
        base: map.base(),
        attributes: map.attributes().to_vec(),
        cells: map
            .cells()
            .iter()
            .map(|cell| CellFile {
                traversable: cell.traversable,
                counts: map
                    .attributes()
                    .iter()
                    .zip(&cell.counts)
                    .map(|(a, row)| (a.name.clone(), row.iter().map(|&n| n as i64).collect()))
                    .collect(),
            })
            .collect(),
        regions: map.regions().cloned(),
    };
    let mut bytes = serde_json::to_vec(&file).expect("city file serializes");
    bytes.push(b'\n');
    bytes
}
