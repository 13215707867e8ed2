/** Decoded server image ready for a canvas `putImageData`. */
export interface RgbaImage {
  width: number;
  height: number;
  /** RGBA, row-major, alpha forced opaque. */
  data: Uint8ClampedArray<ArrayBuffer>;
}

/**
 * Decode the binary PPM (P6, maxval 255) images the service returns.
 * This is pure container parsing; all color values come from the server.
 */
export function decodePpm(bytes: Uint8Array): RgbaImage {
  let pos = 0;
  const token = (): string => {
    // skip whitespace and '#' comment lines between header fields
    for (;;) {
      while (pos < bytes.length && isSpace(bytes[pos])) pos++;
      if (bytes[pos] === 0x23) {
        while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      } else {
        break;
      }
    }
    const start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos])) pos++;
    return String.fromCharCode(...bytes.subarray(start, pos));
  };

  if (token() !== 'P6') throw new Error('not a binary PPM image');
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width > 0) || !(height > 0)) throw new Error('bad PPM dimensions');
  if (maxval !== 255) throw new Error(`unsupported PPM maxval ${maxval}`);
  pos++; // single whitespace byte after the header

  const expected = width * height * 3;
  const pixels = bytes.subarray(pos, pos + expected);
  if (pixels.length !== expected) throw new Error('truncated PPM payload');

  const data = new Uint8ClampedArray(width * height * 4);
  for (let i = 0, j = 0; i < expected; i += 3, j += 4) {
    data[j] = pixels[i];
    data[j + 1] = pixels[i + 1];
    data[j + 2] = pixels[i + 2];
    data[j + 3] = 255;
  }
  return { width, height, data };
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
}
