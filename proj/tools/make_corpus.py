"""Writes the regression corpus: ten scikit-image sample images as 8-bit PGM.

Each image is reduced to luminance (0.299 R + 0.587 G + 0.114 B), centre-cropped
to a square, and resized with anti-aliasing to SIZE x SIZE.

    python3 tools/make_corpus.py [output_dir] [--size 128]
"""

import argparse
import os

import numpy as np
import skimage
import skimage.io
import skimage.transform

NAMES = {
    "astronaut": "astronaut.png",
    "brick": "brick.png",
    "camera": "camera.png",
    "chelsea": "chelsea.png",
    "coffee": "coffee.png",
    "coins": "coins.png",
    "hubble": "hubble_deep_field.jpg",
    "moon": "moon.png",
    "motorcycle": "motorcycle_left.png",
    "rocket": "rocket.jpg",
}


def luminance(img):
    img = skimage.img_as_float64(img)
    if img.ndim == 3:
        img = 0.299 * img[..., 0] + 0.587 * img[..., 1] + 0.114 * img[..., 2]
    return img


def centre_square(img):
    h, w = img.shape
    s = min(h, w)
    y0, x0 = (h - s) // 2, (w - s) // 2
    return img[y0:y0 + s, x0:x0 + s]


def write_pgm(path, img):
    q = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (q.shape[1], q.shape[0]))
        f.write(q.tobytes())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("output", nargs="?", default=os.path.join(os.path.dirname(__file__), "..", "data", "corpus"))
    parser.add_argument("--size", type=int, default=128)
    args = parser.parse_args()
    os.makedirs(args.output, exist_ok=True)
    data_dir = os.path.join(os.path.dirname(skimage.__file__), "data")
    for name, fname in sorted(NAMES.items()):
        raw = skimage.io.imread(os.path.join(data_dir, fname))
        if raw.ndim == 3 and raw.shape[2] == 4:
            raw = raw[..., :3]
        img = centre_square(luminance(raw))
        img = skimage.transform.resize(img, (args.size, args.size), order=1, anti_aliasing=True)
        write_pgm(os.path.join(args.output, name + ".pgm"), img)


if __name__ == "__main__":
    main()
