//! Standard MIDI File (formats 0 and 1) reader and a minimal format-0 writer.

use std::collections::{HashMap, VecDeque};

use super::{sort_notes, NoteEvent};
use crate::error::{Error, MidiErrorKind, Result};

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    fn err(&self, kind: MidiErrorKind) -> Error {
        Error::midi(self.pos, kind)
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn u8(&mut self) -> Result<u8> {
        let b = *self
            .bytes
            .get(self.pos)
            .ok_or_else(|| self.err(MidiErrorKind::UnexpectedEof))?;
        self.pos += 1;
        Ok(b)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(self.err(MidiErrorKind::UnexpectedEof));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16_be(&mut self) -> Result<u16> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32_be(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    /// Variable-length quantity, at most four bytes.
    fn vlq(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut value: u32 = 0;
        for _ in 0..4 {
            let b = match self.peek() {
                Some(b) => b,
                None => return Err(Error::midi(start, MidiErrorKind::TruncatedVlq)),
            };
            self.pos += 1;
            value = (value << 7) | u32::from(b & 0x7f);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(Error::midi(start, MidiErrorKind::TruncatedVlq))
    }
}

/// Parses a Standard MIDI File into note events.
///
/// Note-ons are paired with the earliest open note-on of the same channel and
/// pitch (a note-on with velocity 0 counts as note-off). Notes left open at the
/// end of a track are closed at the end-of-track tick. Tempo is ignored: onsets
/// and durations are in ticks. The result is merged across tracks and sorted by
/// onset, then pitch.
pub fn parse_midi(bytes: &[u8]) -> Result<Vec<NoteEvent>> {
    let mut r = Reader::new(bytes);
    if r.remaining() < 4 || &bytes[0..4] != b"MThd" {
        return Err(Error::midi(0, MidiErrorKind::MissingHeader));
    }
    r.pos = 4;
    let len_at = r.pos;
    let header_len = r.u32_be()? as usize;
    if header_len < 6 {
        return Err(Error::midi(
            len_at,
            MidiErrorKind::MalformedHeader(format!("header length {header_len} < 6")),
        ));
    }
    let header_start = r.pos;
    let format = r.u16_be()?;
    let ntracks = r.u16_be()?;
    let division_at = r.pos;
    let division = r.u16_be()?;
    if format > 2 {
        return Err(Error::midi(
            header_start,
            MidiErrorKind::MalformedHeader(format!("unknown format {format}")),
        ));
    }
    if format == 2 {
        return Err(Error::midi(header_start, MidiErrorKind::UnsupportedFormat(2)));
    }
    if format == 0 && ntracks != 1 {
        return Err(Error::midi(
            header_start + 2,
            MidiErrorKind::MalformedHeader(format!("format 0 with {ntracks} tracks")),
        ));
    }
    if division & 0x8000 != 0 {
        return Err(Error::midi(division_at, MidiErrorKind::UnsupportedDivision));
    }
    // skip any extra header bytes
    r.pos = header_start;
    r.take(header_len)?;

    let mut notes = Vec::new();
    let mut tracks_read = 0;
    while tracks_read < ntracks {
        let chunk_at = r.pos;
        let id = r.take(4).map_err(|_| Error::midi(chunk_at, MidiErrorKind::MissingTrack))?;
        let len = r.u32_be()? as usize;
        if r.remaining() < len {
            return Err(r.err(MidiErrorKind::UnexpectedEof));
        }
        if id != b"MTrk" {
            // unknown chunk types are skipped per the SMF rules
            r.pos += len;
            continue;
        }
        let body_start = r.pos;
        parse_track(&bytes[..body_start + len], body_start, &mut notes)?;
        r.pos = body_start + len;
        tracks_read += 1;
    }
    sort_notes(&mut notes);
    Ok(notes)
}

fn parse_track(bytes: &[u8], start: usize, notes: &mut Vec<NoteEvent>) -> Result<()> {
    let mut r = Reader::new(bytes);
    r.pos = start;
    let mut tick: u64 = 0;
    let mut running: Option<u8> = None;
    // (channel, pitch) -> queue of (onset, velocity)
    let mut open: HashMap<(u8, u8), VecDeque<(u64, u8)>> = HashMap::new();

    while r.remaining() > 0 {
        tick += u64::from(r.vlq()?);
        let status_at = r.pos;
        let first = r.u8()?;
        let status = if first & 0x80 != 0 {
            first
        } else {
            r.pos -= 1;
            running.ok_or_else(|| Error::midi(status_at, MidiErrorKind::NoRunningStatus))?
        };
        match status {
            0x80..=0xef => {
                running = Some(status);
                let kind = status & 0xf0;
                let channel = status & 0x0f;
                let data_len = if kind == 0xc0 || kind == 0xd0 { 1 } else { 2 };
                let data = r.take(data_len)?;
                if data.iter().any(|b| b & 0x80 != 0) {
                    return Err(Error::midi(status_at, MidiErrorKind::InvalidStatus(status)));
                }
                match (kind, data_len) {
                    (0x90, 2) if data[1] > 0 => {
                        open.entry((channel, data[0]))
                            .or_default()
                            .push_back((tick, data[1]));
                    }
                    (0x80, 2) | (0x90, 2) => {
                        if let Some((onset, velocity)) =
                            open.get_mut(&(channel, data[0])).and_then(VecDeque::pop_front)
                        {
                            notes.push(NoteEvent {
                                pitch: data[0],
                                onset,
                                duration: tick - onset,
                                velocity,
                            });
                        }
                    }
                    _ => {}
                }
            }
            0xff => {
                running = None;
                let meta_type = r.u8()?;
                let len = r.vlq()? as usize;
                r.take(len)?;
                if meta_type == 0x2f {
                    break;
                }
            }
            0xf0 | 0xf7 => {
                running = None;
                let len = r.vlq()? as usize;
                r.take(len)?;
            }
            other => return Err(Error::midi(status_at, MidiErrorKind::InvalidStatus(other))),
        }
    }

    for ((_, pitch), queue) in open {
        for (onset, velocity) in queue {
            notes.push(NoteEvent {
                pitch,
                onset,
                duration: tick - onset,
                velocity,
            });
        }
    }
    Ok(())
}

fn push_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut buf = [0u8; 5];
    let mut i = buf.len() - 1;
    buf[i] = (value & 0x7f) as u8;
    value >>= 7;
    while value > 0 {
        i -= 1;
        buf[i] = (value & 0x7f) as u8 | 0x80;
        value >>= 7;
    }
    out.extend_from_slice(&buf[i..]);
}

/// Writes notes as a single-track format-0 file on channel 0.
///
/// Velocities of 0 are written as 1 so the note-on is not read back as a note-off.
pub fn serialize_midi(notes: &[NoteEvent], ticks_per_quarter: u16) -> Vec<u8> {
    // (tick, order, pitch, velocity, is_on): offs precede ons at the same tick,
    // except the off of a zero-length note which must follow its own on.
    let mut events: Vec<(u64, u8, usize, u8, u8, bool)> = Vec::with_capacity(notes.len() * 2);
    for (i, n) in notes.iter().enumerate() {
        events.push((n.onset, 1, i, n.pitch, n.velocity.max(1), true));
        let order = if n.duration == 0 { 2 } else { 0 };
        events.push((n.end(), order, i, n.pitch, 0, false));
    }
    events.sort_by_key(|e| (e.0, e.1, e.2));

    let mut track = Vec::new();
    let mut last = 0u64;
    for (tick, _, _, pitch, velocity, on) in events {
        push_vlq(&mut track, (tick - last) as u32);
        last = tick;
        if on {
            track.extend_from_slice(&[0x90, pitch & 0x7f, velocity & 0x7f]);
        } else {
            track.extend_from_slice(&[0x80, pitch & 0x7f, 0x40]);
        }
    }
    track.extend_from_slice(&[0x00, 0xff, 0x2f, 0x00]);

    let mut out = Vec::with_capacity(track.len() + 22);
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&0u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&(ticks_per_quarter & 0x7fff).to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.len() as u32).to_be_bytes());
    out.extend_from_slice(&track);
    out
}
