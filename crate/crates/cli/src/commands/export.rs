use std::fs::File;
use std::io::{BufWriter, Write};

use lee_toric::interleaver::InterleavingMap;
use rayon::prelude::*;

use crate::{CliError, ExportArgs, MapFormat};

pub const CSV_HEADER: &str = "logical,physical";

const CHUNK: u64 = 1 << 20;

/// Streams `(logical, physical)` pairs in logical order, one chunk in memory
/// at a time.
pub fn write_map<W: Write>(map: &InterleavingMap, format: MapFormat, w: &mut W) -> Result<u64, CliError> {
    let total = map.total_slots();
    if format == MapFormat::Csv {
        writeln!(w, "{CSV_HEADER}")?;
    }
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let physical: Vec<u64> =
            (start..end).into_par_iter().map(|i| map.logical_to_physical_index(i)).collect::<Result<_, _>>()?;
        for (i, p) in (start..end).zip(physical) {
            match format {
                MapFormat::Csv => writeln!(w, "{i},{p}")?,
                MapFormat::Binary => {
                    w.write_all(&i.to_le_bytes())?;
                    w.write_all(&p.to_le_bytes())?;
                }
            }
        }
        start = end;
    }
    Ok(total)
}

pub fn run(args: &ExportArgs) -> Result<(), CliError> {
    let map = InterleavingMap::new(args.n)?;
    let mut w = BufWriter::new(File::create(&args.out)?);
    let records = write_map(&map, args.format, &mut w)?;
    w.flush()?;
    eprintln!("wrote {records} records to {}", args.out.display());
    Ok(())
}
