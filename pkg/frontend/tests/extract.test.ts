import { execFileSync } from 'child_process'
import { mkdirSync, mkdtempSync, readFileSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { describe, expect, it, vi } from 'vitest'
import { extract, framePath } from '../src/extract.js'
import { Image, writePPM } from '../src/ppm.js'
import { parseBins } from '../src/cli.js'

const COLORS: [number, number, number][] = [
  [220, 30, 30],
  [30, 30, 220],
]

/**
 * 10-frame synthetic raster set: two colored boxes drifting right on a gray
 * background, with a matching detection file.
 */
function makeScene(dir: string, frames = 10) {
  mkdirSync(join(dir, 'frames'), { recursive: true })
  const detLines: string[] = []
  for (let f = 1; f <= frames; f++) {
    const w = 160
    const h = 120
    const data = new Uint8Array(w * h * 3).fill(128)
    const img: Image = { width: w, height: h, data }
    const boxes: [number, number][] = [
      [10 + 2 * f, 20],
      [10 + 2 * f, 70],
    ]
    boxes.forEach(([bx, by], k) => {
      for (let y = by; y < by + 30; y++)
        for (let x = bx; x < bx + 20; x++) data.set(COLORS[k], (y * w + x) * 3)
      detLines.push(`${f},-1,${bx},${by},20,30,1.0,-1,-1,-1`)
    })
    writePPM(framePath(join(dir, 'frames'), f), img)
  }
  writeFileSync(join(dir, 'det.txt'), detLines.join('\n') + '\n')
}

describe('extract (histogram mode)', () => {
  it('writes one 256-dim record per detection, in det order', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'ext-'))
    makeScene(dir)
    const out = join(dir, 'features.txt')
    const res = await extract({
      mode: 'histogram',
      framesDir: join(dir, 'frames'),
      detPath: join(dir, 'det.txt'),
      outPath: out,
    })
    expect(res).toEqual({ written: 20, skipped: 0 })
    const lines = readFileSync(out, 'utf8').trim().split('\n')
    expect(lines[0]).toBe('D 256')
    expect(lines.length).toBe(21)
    expect(lines[1].startsWith('1,0,')).toBe(true)
    expect(lines[2].startsWith('1,1,')).toBe(true)
  })

  it('is deterministic: identical crops give identical feature lines', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'ext-'))
    makeScene(dir)
    const a = join(dir, 'a.txt')
    const b = join(dir, 'b.txt')
    const cfg = { mode: 'histogram' as const, framesDir: join(dir, 'frames'), detPath: join(dir, 'det.txt') }
    await extract({ ...cfg, outPath: a })
    await extract({ ...cfg, outPath: b })
    expect(readFileSync(a, 'utf8')).toBe(readFileSync(b, 'utf8'))
    // the two boxes are uniform color; every frame's crop of box 0 is identical
    const lines = readFileSync(a, 'utf8').trim().split('\n')
    expect(lines[1].slice(4)).toBe(lines[3].slice(4))
  })

  it('sidecar loads through the tracker loader with zero unmatched records', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'ext-'))
    makeScene(dir)
    const out = join(dir, 'features.txt')
    await extract({
      mode: 'histogram',
      framesDir: join(dir, 'frames'),
      detPath: join(dir, 'det.txt'),
      outPath: out,
    })
    const script = [
      'import sys',
      'from reidtrack import io',
      'dets = io.parse_detections(sys.argv[1])',
      'dets = io.load_features(sys.argv[2], dets)',
      'print(sum(d.feature is not None for d in dets), len(dets))',
    ].join('\n')
    const stdout = execFileSync('python3', ['-c', script, join(dir, 'det.txt'), out], {
      encoding: 'utf8',
    })
    expect(stdout.trim()).toBe('20 20')
  })

  it('errors on a missing frame image, naming the frame', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'ext-'))
    makeScene(dir, 3)
    writeFileSync(join(dir, 'det.txt'), '7,-1,10,10,20,30,1.0,-1,-1,-1\n')
    await expect(
      extract({
        mode: 'histogram',
        framesDir: join(dir, 'frames'),
        detPath: join(dir, 'det.txt'),
        outPath: join(dir, 'f.txt'),
      }),
    ).rejects.toThrow('missing frame image for frame 7')
  })

  it('skips a fully-outside box with a warning', async () => {
    const dir = mkdtempSync(join(tmpdir(), 'ext-'))
    makeScene(dir, 2)
    const det = readFileSync(join(dir, 'det.txt'), 'utf8') + '1,-1,5000,5000,20,30,1.0,-1,-1,-1\n'
    writeFileSync(join(dir, 'det.txt'), det)
    const warn = vi.spyOn(console, 'error').mockImplementation(() => {})
    const res = await extract({
      mode: 'histogram',
      framesDir: join(dir, 'frames'),
      detPath: join(dir, 'det.txt'),
      outPath: join(dir, 'f.txt'),
    })
    warn.mockRestore()
    expect(res.skipped).toBe(1)
    expect(res.written).toBe(4)
    const lines = readFileSync(join(dir, 'f.txt'), 'utf8').trim().split('\n')
    expect(lines.some((l) => l.startsWith('1,2,'))).toBe(false)
  })
})

describe('parseBins', () => {
  it('parses h,s,v triples', () => {
    expect(parseBins('8,8,4')).toEqual({ h: 8, s: 8, v: 4 })
    expect(parseBins(' 4, 4, 2 ')).toEqual({ h: 4, s: 4, v: 2 })
  })

  it('rejects malformed specs', () => {
    expect(() => parseBins('8,8')).toThrow('bins')
    expect(() => parseBins('8,0,4')).toThrow('bins')
  })
})
