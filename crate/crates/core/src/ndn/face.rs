use std::fmt;

use crate::sim::Direction;

/// Interface identifier, local to a node and stable for the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub u32);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "face{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub peer: usize,
    /// Face id on the peer side of the link.
    pub peer_face: FaceId,
    pub link: usize,
    pub direction: Direction,
}
