//! Binary node tables.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `BLTABLE\0` |
//! | 4     | version (u32, currently 1) |
//! | 4     | nx (u32) |
//! | 4     | ny (u32) |
//! | 4     | columns per node (u32): 3 for positions, 18 for full jets |
//! | 8·nx·ny·cols | f64 values, node k = j·nx + i |
//!
//! With 18 columns a node stores X, X_x, X_y, X_xx, X_xy, X_yy in that
//! order, three components each.

use std::io::{Read, Write};
use std::path::Path;

use bonnetlab_core::surface::PointJet;
use bonnetlab_core::vec3::Vec3;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"BLTABLE\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum TableRows {
    Positions(Vec<Vec3>),
    Jets(Vec<PointJet>),
}

impl TableRows {
    pub fn len(&self) -> usize {
        match self {
            TableRows::Positions(p) => p.len(),
            TableRows::Jets(j) => j.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn columns(&self) -> u32 {
        match self {
            TableRows::Positions(_) => 3,
            TableRows::Jets(_) => 18,
        }
    }

    pub fn has_derivatives(&self) -> bool {
        matches!(self, TableRows::Jets(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub nx: usize,
    pub ny: usize,
    pub rows: TableRows,
}

impl Table {
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        for v in [VERSION, self.nx as u32, self.ny as u32, self.rows.columns()] {
            w.write_all(&v.to_le_bytes())?;
        }
        let mut put = |v: Vec3| -> std::io::Result<()> {
            for c in [v.x, v.y, v.z] {
                w.write_all(&c.to_le_bytes())?;
            }
            Ok(())
        };
        match &self.rows {
            TableRows::Positions(p) => p.iter().try_for_each(|&v| put(v)),
            TableRows::Jets(j) => j
                .iter()
                .try_for_each(|p| p.as_array().into_iter().try_for_each(&mut put)),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(24 + 8 * self.rows.len() * self.rows.columns() as usize);
        self.write_to(&mut buf).map_err(|e| Error::io(path, e))?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::Schema(format!("table unreadable: {e}")))?;
        Self::parse(&bytes)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&bytes).map_err(|e| match e {
            Error::Schema(m) => Error::Schema(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 24 || &bytes[..8] != MAGIC {
            return Err(Error::Schema("not a BLTABLE file".into()));
        }
        let word = |k: usize| u32::from_le_bytes(bytes[8 + 4 * k..12 + 4 * k].try_into().unwrap());
        let (version, nx, ny, cols) = (word(0), word(1) as usize, word(2) as usize, word(3));
        if version != VERSION {
            return Err(Error::Schema(format!("table version {version}, expected {VERSION}")));
        }
        if cols != 3 && cols != 18 {
            return Err(Error::Schema(format!("{cols} columns per node, expected 3 or 18")));
        }
        let n = nx * ny;
        let expected = 24 + 8 * n * cols as usize;
        if bytes.len() != expected {
            return Err(Error::Schema(format!(
                "{} bytes for a {nx} x {ny} table with {cols} columns, expected {expected}",
                bytes.len()
            )));
        }
        let values: Vec<f64> = bytes[24..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let vecs: Vec<Vec3> = values
            .chunks_exact(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]))
            .collect();
        let rows = if cols == 3 {
            TableRows::Positions(vecs)
        } else {
            TableRows::Jets(
                vecs.chunks_exact(6)
                    .map(|c| PointJet::from_array(c.try_into().unwrap()))
                    .collect(),
            )
        };
        Ok(Table { nx, ny, rows })
    }
}
