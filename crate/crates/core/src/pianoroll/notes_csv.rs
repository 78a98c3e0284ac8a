use super::{NoteEvent, DEFAULT_VELOCITY};
use crate::error::{Error, Result};

fn field<T: std::str::FromStr>(raw: &str, name: &str, line: usize) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Csv {
        line,
        message: format!("{name} is not a non-negative integer: {:?}", raw.trim()),
    })
}

/// Parses a note list with header `pitch,onset,duration[,velocity]`.
///
/// Line numbers in errors are 1-based and count the header. Velocity defaults to 64.
pub fn parse_note_csv(text: &str) -> Result<Vec<NoteEvent>> {
    let mut lines = text.lines().enumerate();
    let with_velocity = match lines.next() {
        Some((_, header)) => {
            let cols: Vec<&str> = header.split(',').map(str::trim).collect();
            match cols.as_slice() {
                ["pitch", "onset", "duration"] => false,
                ["pitch", "onset", "duration", "velocity"] => true,
                _ => {
                    return Err(Error::Csv {
                        line: 1,
                        message: "expected header pitch,onset,duration[,velocity]".into(),
                    })
                }
            }
        }
        None => return Ok(Vec::new()),
    };
    let expected = if with_velocity { 4 } else { 3 };

    let mut notes = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = raw.split(',').collect();
        if cols.len() != expected {
            return Err(Error::Csv {
                line,
                message: format!("expected {expected} fields, found {}", cols.len()),
            });
        }
        let pitch: u32 = field(cols[0], "pitch", line)?;
        let onset: u64 = field(cols[1], "onset", line)?;
        let duration: u64 = field(cols[2], "duration", line)?;
        let velocity: u32 = if with_velocity {
            field(cols[3], "velocity", line)?
        } else {
            u32::from(DEFAULT_VELOCITY)
        };
        if pitch > 127 {
            return Err(Error::Csv {
                line,
                message: format!("pitch {pitch} out of range [0, 127]"),
            });
        }
        if velocity > 127 {
            return Err(Error::Csv {
                line,
                message: format!("velocity {velocity} out of range [0, 127]"),
            });
        }
        notes.push(NoteEvent {
            pitch: pitch as u8,
            onset,
            duration,
            velocity: velocity as u8,
        });
    }
    Ok(notes)
}
