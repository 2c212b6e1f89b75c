//! Bit-exact encoder/decoder for the secured geographic-routing packet.
//!
//! Layout (big-endian, fixed 48-byte header):
//!
//! ```text
//! byte 0        version (high nibble) | command (low nibble)
//! byte 1        reserved, must be zero
//! bytes 2..4    packet length in bytes, including data and auth
//! bytes 4..12   source position
//! bytes 12..20  perimeter-entry position Lp (zero unless perimeter mode)
//! bytes 20..28  destination position
//! bytes 28..44  first face edge e0 as two positions (zero unless perimeter)
//! bytes 44..46  port
//! bytes 46..48  reserved, must be zero
//! bytes 48..N   data, at most 250 bytes
//! last 16       authentication tag
//! ```

use crate::geo::Position;
use thiserror::Error;

/// Fixed header length in bytes.
pub const HEADER_LEN: usize = 48;
/// Authentication tag length in bytes.
pub const AUTH_LEN: usize = 16;
/// Smallest well-formed packet: header plus tag, no data.
pub const MIN_PACKET_LEN: usize = HEADER_LEN + AUTH_LEN;
/// Data field capacity.
pub const MAX_DATA_LEN: usize = 250;
/// Largest well-formed packet.
pub const MAX_PACKET_LEN: usize = MIN_PACKET_LEN + MAX_DATA_LEN;

/// Protocol version understood by this implementation.
pub const VERSION: u8 = 1;

/// Message type carried in the low nibble of byte 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Command {
    BeaconRequest = 0b0001,
    BeaconResponse = 0b0010,
    GreedyData = 0b0011,
    PerimeterData = 0b0100,
}

impl Command {
    pub fn from_nibble(nibble: u8) -> Option<Command> {
        match nibble {
            0b0001 => Some(Command::BeaconRequest),
            0b0010 => Some(Command::BeaconResponse),
            0b0011 => Some(Command::GreedyData),
            0b0100 => Some(Command::PerimeterData),
            _ => None,
        }
    }

    pub fn is_data(self) -> bool {
        matches!(self, Command::GreedyData | Command::PerimeterData)
    }

    pub fn is_beacon(self) -> bool {
        matches!(self, Command::BeaconRequest | Command::BeaconResponse)
    }
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Command::BeaconRequest => "beacon-request",
            Command::BeaconResponse => "beacon-response",
            Command::GreedyData => "greedy-data",
            Command::PerimeterData => "perimeter-data",
        };
        f.write_str(name)
    }
}

/// A routing packet. `perimeter_pos` is Lp, the point where the packet
/// entered perimeter mode; `edge` is e0, the first edge crossed on the
/// current face. Both stay zero outside perimeter mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpsrPacket {
    pub version: u8,
    pub command: Command,
    pub source_pos: Position,
    pub perimeter_pos: Position,
    pub dest_pos: Position,
    pub edge: (Position, Position),
    pub port: u16,
    pub data: Vec<u8>,
    pub auth: [u8; AUTH_LEN],
}

impl GpsrPacket {
    /// A zeroed packet of the given command, ready to be filled in.
    pub fn new(command: Command) -> Self {
        GpsrPacket {
            version: VERSION,
            command,
            source_pos: Position::ZERO,
            perimeter_pos: Position::ZERO,
            dest_pos: Position::ZERO,
            edge: (Position::ZERO, Position::ZERO),
            port: 0,
            data: Vec::new(),
            auth: [0u8; AUTH_LEN],
        }
    }

    /// Total encoded length: header + data + auth.
    pub fn packet_length(&self) -> usize {
        HEADER_LEN + self.data.len() + AUTH_LEN
    }

    fn perimeter_fields_zero(&self) -> bool {
        self.perimeter_pos.is_zero() && self.edge.0.is_zero() && self.edge.1.is_zero()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("data field is {len} bytes, limit is {MAX_DATA_LEN}")]
    OversizeData { len: usize },
    #[error("perimeter fields must be zero for {command} packets")]
    PerimeterFieldsSet { command: Command },
    #[error("version {0} is not encodable (protocol speaks version {VERSION})")]
    BadVersion(u8),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("truncated packet: {len} bytes, minimum is {MIN_PACKET_LEN}")]
    Truncated { len: usize },
    #[error("packet_length field says {declared} but {actual} bytes were received")]
    LengthMismatch { declared: usize, actual: usize },
    #[error("packet_length field {declared} exceeds the {MAX_PACKET_LEN}-byte maximum")]
    OversizeData { declared: usize },
    #[error("unknown command nibble {nibble:#06b}")]
    UnknownCommand { nibble: u8 },
    #[error("unsupported version {version}")]
    BadVersion { version: u8 },
    #[error("reserved field `{field}` is nonzero")]
    NonzeroReserved { field: &'static str },
    #[error("perimeter fields are nonzero on a {command} packet")]
    NonzeroPerimeterFields { command: Command },
}

/// Encodes a packet into its canonical byte sequence.
pub fn encode(pkt: &GpsrPacket) -> Result<Vec<u8>, EncodeError> {
    if pkt.version != VERSION {
        return Err(EncodeError::BadVersion(pkt.version));
    }
    if pkt.data.len() > MAX_DATA_LEN {
        return Err(EncodeError::OversizeData {
            len: pkt.data.len(),
        });
    }
    if pkt.command != Command::PerimeterData && !pkt.perimeter_fields_zero() {
        return Err(EncodeError::PerimeterFieldsSet {
            command: pkt.command,
        });
    }

    let total = pkt.packet_length();
    let mut out = Vec::with_capacity(total);
    out.push((pkt.version << 4) | (pkt.command as u8));
    out.push(0); // reserved
    out.extend_from_slice(&(total as u16).to_be_bytes());
    out.extend_from_slice(&pkt.source_pos.encode64());
    out.extend_from_slice(&pkt.perimeter_pos.encode64());
    out.extend_from_slice(&pkt.dest_pos.encode64());
    out.extend_from_slice(&pkt.edge.0.encode64());
    out.extend_from_slice(&pkt.edge.1.encode64());
    out.extend_from_slice(&pkt.port.to_be_bytes());
    out.extend_from_slice(&[0, 0]); // reserved
    out.extend_from_slice(&pkt.data);
    out.extend_from_slice(&pkt.auth);
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

fn take_pos(bytes: &[u8], at: usize) -> Position {
    let mut buf = [0u8; 8];
    buf.copy_from_slice(&bytes[at..at + 8]);
    Position::decode64(buf)
}

/// Decodes and validates a packet; the exact inverse of [`encode`].
pub fn decode(bytes: &[u8]) -> Result<GpsrPacket, DecodeError> {
    if bytes.len() < MIN_PACKET_LEN {
        return Err(DecodeError::Truncated { len: bytes.len() });
    }
    let version = bytes[0] >> 4;
    if version != VERSION {
        return Err(DecodeError::BadVersion { version });
    }
    let nibble = bytes[0] & 0x0F;
    let command = Command::from_nibble(nibble).ok_or(DecodeError::UnknownCommand { nibble })?;
    if bytes[1] != 0 {
        return Err(DecodeError::NonzeroReserved { field: "reserved1" });
    }
    let declared = usize::from(u16::from_be_bytes([bytes[2], bytes[3]]));
    if declared > MAX_PACKET_LEN {
        return Err(DecodeError::OversizeData { declared });
    }
    if declared != bytes.len() {
        return Err(DecodeError::LengthMismatch {
            declared,
            actual: bytes.len(),
        });
    }
    if bytes[46] != 0 || bytes[47] != 0 {
        return Err(DecodeError::NonzeroReserved { field: "reserved2" });
    }

    let pkt = GpsrPacket {
        version,
        command,
        source_pos: take_pos(bytes, 4),
        perimeter_pos: take_pos(bytes, 12),
        dest_pos: take_pos(bytes, 20),
        edge: (take_pos(bytes, 28), take_pos(bytes, 36)),
        port: u16::from_be_bytes([bytes[44], bytes[45]]),
        data: bytes[HEADER_LEN..bytes.len() - AUTH_LEN].to_vec(),
        auth: bytes[bytes.len() - AUTH_LEN..].try_into().expect("16 bytes"),
    };
    if command != Command::PerimeterData && !pkt.perimeter_fields_zero() {
        return Err(DecodeError::NonzeroPerimeterFields { command });
    }
    Ok(pkt)
}

/// The byte region covered by the signature: everything from the version
/// nibble through the end of data, excluding the trailing auth field.
pub fn signed_region(bytes: &[u8]) -> Result<&[u8], DecodeError> {
    if bytes.len() < MIN_PACKET_LEN {
        return Err(DecodeError::Truncated { len: bytes.len() });
    }
    Ok(&bytes[..bytes.len() - AUTH_LEN])
}
