import { readFileSync, writeFileSync } from 'fs'

export interface Image {
  width: number
  height: number
  /** RGB, row-major, 3 bytes per pixel */
  data: Uint8Array
}

/** Read a binary (P6) PPM file with 8-bit samples. */
export function readPPM(path: string): Image {
  const buf = readFileSync(path)
  let pos = 0
  const token = () => {
    // skip whitespace and '#' comment lines between header tokens
    for (;;) {
      while (pos < buf.length && isSpace(buf[pos])) pos++
      if (buf[pos] === 0x23) {
        while (pos < buf.length && buf[pos] !== 0x0a) pos++
      } else break
    }
    const start = pos
    while (pos < buf.length && !isSpace(buf[pos])) pos++
    return buf.subarray(start, pos).toString('ascii')
  }
  const magic = token()
  if (magic !== 'P6') throw new Error(`${path}: not a binary PPM (magic ${magic})`)
  const width = parseInt(token(), 10)
  const height = parseInt(token(), 10)
  const maxval = parseInt(token(), 10)
  if (!(width > 0 && height > 0)) throw new Error(`${path}: bad dimensions`)
  if (maxval !== 255) throw new Error(`${path}: only maxval 255 supported, got ${maxval}`)
  pos++ // single whitespace byte after maxval
  const need = width * height * 3
  if (buf.length - pos < need) throw new Error(`${path}: truncated pixel data`)
  return { width, height, data: new Uint8Array(buf.subarray(pos, pos + need)) }
}

export function writePPM(path: string, image: Image): void {
  const header = Buffer.from(`P6\n${image.width} ${image.height}\n255\n`, 'ascii')
  writeFileSync(path, Buffer.concat([header, Buffer.from(image.data)]))
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d
}
