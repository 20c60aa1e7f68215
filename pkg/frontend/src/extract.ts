import { existsSync } from 'fs'
import { join } from 'path'
import { parseDetections } from './det.js'
import { cropBox } from './crop.js'
import { DEFAULT_BINS, HistBins, hsvHistogram, normalizeHistogram } from './histogram.js'
import { embed, loadModel } from './embedding.js'
import { Image, readPPM } from './ppm.js'
import { FeatureRecord, writeSidecar } from './sidecar.js'

export interface ExtractorConfig {
  mode: 'embedding' | 'histogram'
  framesDir: string
  detPath: string
  outPath: string
  modelPath?: string
  bins?: HistBins
}

export function framePath(framesDir: string, frame: number): string {
  return join(framesDir, `${String(frame).padStart(6, '0')}.ppm`)
}

/**
 * Crop every detection box out of its frame image and write the feature
 * sidecar. Output follows det-file order; crops fully outside the frame are
 * skipped with a warning.
 */
export async function extract(config: ExtractorConfig): Promise<{ written: number; skipped: number }> {
  const bins = config.bins ?? DEFAULT_BINS
  if (bins.h < 1 || bins.s < 1 || bins.v < 1) throw new Error('histogram bins must be positive')
  let featureOf: (crop: Image) => Float64Array
  let dim: number
  if (config.mode === 'embedding') {
    if (!config.modelPath) throw new Error('embedding mode requires a model path')
    const model = await loadModel(config.modelPath)
    featureOf = (crop) => embed(model, crop)
    dim = embed(model, { width: 2, height: 2, data: new Uint8Array(12) }).length
  } else {
    featureOf = (crop) => normalizeHistogram(hsvHistogram(crop, bins))
    dim = bins.h * bins.s * bins.v
  }

  const detections = parseDetections(config.detPath)
  const frames = new Map<number, Image>()
  const records: FeatureRecord[] = []
  let skipped = 0
  for (const det of detections) {
    let image = frames.get(det.frame)
    if (!image) {
      const path = framePath(config.framesDir, det.frame)
      if (!existsSync(path)) throw new Error(`missing frame image for frame ${det.frame}: ${path}`)
      image = readPPM(path)
      frames.set(det.frame, image)
    }
    const crop = cropBox(image, det.left, det.top, det.w, det.h)
    if (!crop) {
      console.error(`warning: detection ${det.frame}/${det.index} lies outside the frame, skipped`)
      skipped++
      continue
    }
    records.push({ frame: det.frame, index: det.index, values: featureOf(crop) })
  }
  writeSidecar(config.outPath, dim, records)
  return { written: records.length, skipped }
}
