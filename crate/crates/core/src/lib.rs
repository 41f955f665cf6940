pub mod charvar;
pub mod cli;
pub mod ffcount;
pub mod gring;
pub mod repvar;
pub mod topology;
