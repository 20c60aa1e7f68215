import { mkdtempSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { describe, expect, it } from 'vitest'
import { cropBox } from '../src/crop.js'
import { Image, readPPM, writePPM } from '../src/ppm.js'

function gradientImage(width: number, height: number): Image {
  const data = new Uint8Array(width * height * 3)
  for (let y = 0; y < height; y++)
    for (let x = 0; x < width; x++) {
      const i = (y * width + x) * 3
      data[i] = x % 256
      data[i + 1] = y % 256
      data[i + 2] = (x + y) % 256
    }
  return { width, height, data }
}

describe('ppm io', () => {
  it('round-trips pixel data', () => {
    const dir = mkdtempSync(join(tmpdir(), 'ppm-'))
    const img = gradientImage(17, 9)
    writePPM(join(dir, 'a.ppm'), img)
    const back = readPPM(join(dir, 'a.ppm'))
    expect(back.width).toBe(17)
    expect(back.height).toBe(9)
    expect(Buffer.from(back.data).equals(Buffer.from(img.data))).toBe(true)
  })

  it('skips header comments', () => {
    const dir = mkdtempSync(join(tmpdir(), 'ppm-'))
    const path = join(dir, 'c.ppm')
    writeFileSync(path, Buffer.concat([
      Buffer.from('P6\n# a comment\n2 1\n255\n', 'ascii'),
      Buffer.from([1, 2, 3, 4, 5, 6]),
    ]))
    const img = readPPM(path)
    expect(img.width).toBe(2)
    expect(Array.from(img.data)).toEqual([1, 2, 3, 4, 5, 6])
  })

  it('rejects non-P6 files', () => {
    const dir = mkdtempSync(join(tmpdir(), 'ppm-'))
    const path = join(dir, 'bad.ppm')
    writeFileSync(path, 'P3\n1 1\n255\n0 0 0\n')
    expect(() => readPPM(path)).toThrow('not a binary PPM')
  })
})

describe('cropBox', () => {
  const img = gradientImage(20, 10)

  it('extracts the exact pixel window', () => {
    const crop = cropBox(img, 3, 2, 4, 5)!
    expect(crop.width).toBe(4)
    expect(crop.height).toBe(5)
    // top-left pixel of the crop is image pixel (3, 2)
    expect(Array.from(crop.data.subarray(0, 3))).toEqual([3, 2, 5])
  })

  it('clamps boxes that stick out of the frame', () => {
    const crop = cropBox(img, -5, -5, 10, 10)!
    expect(crop.width).toBe(5)
    expect(crop.height).toBe(5)
    expect(Array.from(crop.data.subarray(0, 3))).toEqual([0, 0, 0])
  })

  it('returns null for a fully outside box', () => {
    expect(cropBox(img, 100, 100, 5, 5)).toBeNull()
    expect(cropBox(img, -20, 0, 10, 10)).toBeNull()
  })
})
