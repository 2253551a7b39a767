#![allow(dead_code)]

pub mod oracle_data;
pub mod oracles;
