//! The 160×210 RGB frame buffer and the small rasterizer the games draw with.

pub const SCREEN_WIDTH: usize = 160;
pub const SCREEN_HEIGHT: usize = 210;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const BLACK: Rgb = Rgb(0, 0, 0);
    pub const WHITE: Rgb = Rgb(236, 236, 236);
}

/// Row-major RGB pixels, three bytes per pixel.
#[derive(Clone, PartialEq, Eq)]
pub struct Screen {
    pixels: Vec<u8>,
}

impl std::fmt::Debug for Screen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Screen")
            .field("width", &SCREEN_WIDTH)
            .field("height", &SCREEN_HEIGHT)
            .finish_non_exhaustive()
    }
}

impl Default for Screen {
    fn default() -> Self {
        Self::new()
    }
}

impl Screen {
    pub const WIDTH: usize = SCREEN_WIDTH;
    pub const HEIGHT: usize = SCREEN_HEIGHT;
    pub const LEN: usize = SCREEN_WIDTH * SCREEN_HEIGHT * 3;

    pub fn new() -> Self {
        Screen {
            pixels: vec![0; Self::LEN],
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = (y * SCREEN_WIDTH + x) * 3;
        Rgb(self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])
    }

    pub fn set_pixel(&mut self, x: i32, y: i32, c: Rgb) {
        if x < 0 || y < 0 || x >= SCREEN_WIDTH as i32 || y >= SCREEN_HEIGHT as i32 {
            return;
        }
        let i = (y as usize * SCREEN_WIDTH + x as usize) * 3;
        self.pixels[i] = c.0;
        self.pixels[i + 1] = c.1;
        self.pixels[i + 2] = c.2;
    }

    /// Overwrites every pixel.
    pub fn clear(&mut self, c: Rgb) {
        let row = SCREEN_WIDTH * 3;
        for px in self.pixels[..row].chunks_exact_mut(3) {
            px.copy_from_slice(&[c.0, c.1, c.2]);
        }
        for y in 1..SCREEN_HEIGHT {
            self.pixels.copy_within(0..row, y * row);
        }
    }

    /// Fills the rectangle clipped to the screen.
    pub fn fill_rect(&mut self, x: i32, y: i32, w: i32, h: i32, c: Rgb) {
        let x0 = x.max(0);
        let y0 = y.max(0);
        let x1 = (x + w).min(SCREEN_WIDTH as i32);
        let y1 = (y + h).min(SCREEN_HEIGHT as i32);
        if x0 >= x1 || y0 >= y1 {
            return;
        }
        let pattern = [c.0, c.1, c.2];
        for yy in y0..y1 {
            let start = (yy as usize * SCREEN_WIDTH + x0 as usize) * 3;
            let end = (yy as usize * SCREEN_WIDTH + x1 as usize) * 3;
            for px in self.pixels[start..end].chunks_exact_mut(3) {
                px.copy_from_slice(&pattern);
            }
        }
    }

    /// Draws a 1-bit sprite; bit 7 of each row byte is the leftmost pixel.
    pub fn blit(&mut self, x: i32, y: i32, rows: &[u8], scale: i32, c: Rgb) {
        for (dy, bits) in rows.iter().enumerate() {
            for dx in 0..8 {
                if bits & (0x80 >> dx) != 0 {
                    self.fill_rect(x + dx * scale, y + dy as i32 * scale, scale, scale, c);
                }
            }
        }
    }

    /// Draws a non-negative number with the 3×5 digit font, right-aligned at `right`.
    pub fn draw_number(&mut self, right: i32, y: i32, value: u32, scale: i32, c: Rgb) {
        let text = value.to_string();
        let advance = 4 * scale;
        let mut x = right - advance * text.len() as i32;
        for ch in text.bytes() {
            let glyph = &DIGITS[(ch - b'0') as usize];
            self.blit(x, y, glyph, scale, c);
            x += advance;
        }
    }

    /// Number of pixels equal to `c`.
    pub fn count_color(&self, c: Rgb) -> usize {
        self.pixels
            .chunks_exact(3)
            .filter(|p| p[0] == c.0 && p[1] == c.1 && p[2] == c.2)
            .count()
    }
}

const DIGITS: [[u8; 5]; 10] = [
    [0xE0, 0xA0, 0xA0, 0xA0, 0xE0],
    [0x40, 0xC0, 0x40, 0x40, 0xE0],
    [0xE0, 0x20, 0xE0, 0x80, 0xE0],
    [0xE0, 0x20, 0x60, 0x20, 0xE0],
    [0xA0, 0xA0, 0xE0, 0x20, 0x20],
    [0xE0, 0x80, 0xE0, 0x20, 0xE0],
    [0xE0, 0x80, 0xE0, 0xA0, 0xE0],
    [0xE0, 0x20, 0x20, 0x40, 0x40],
    [0xE0, 0xA0, 0xE0, 0xA0, 0xE0],
    [0xE0, 0xA0, 0xE0, 0x20, 0xE0],
];
