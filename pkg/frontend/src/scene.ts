/**
 * 3-D gamut scene: the image and destination gamut meshes rendered as
 * interpenetrating vertex-colored solids in Lab space (x = a, y = L*,
 * z = b), with orbit controls, an adjustable key light, destination
 * transparency, OOG cell markers and cell picking.
 *
 * Mesh vertex indices below the pole ids double as gamut cell ids
 * (sector * bands + band), matching the service's regions payload.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import type { MeshDto } from "./api.js";

export interface SceneHandles {
  setImageMesh(mesh: MeshDto | null): void;
  setProfileMesh(mesh: MeshDto | null): void;
  setProfileOpacity(opacity: number): void;
  setLightAngle(degrees: number): void;
  setOogCells(cells: Set<number>): void;
  setSelectedCell(cell: number | null): void;
  onCellPicked(cb: (cell: number) => void): void;
  dispose(): void;
}

function buildGeometry(mesh: MeshDto): THREE.BufferGeometry {
  const positions = new Float32Array(mesh.vertices.length * 3);
  const colors = new Float32Array(mesh.vertices.length * 3);
  mesh.vertices.forEach((v, i) => {
    positions[i * 3] = v.lab[1];      // a
    positions[i * 3 + 1] = v.lab[0];  // L
    positions[i * 3 + 2] = v.lab[2];  // b
    colors[i * 3] = v.rgb[0];
    colors[i * 3 + 1] = v.rgb[1];
    colors[i * 3 + 2] = v.rgb[2];
  });
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geometry.setAttribute("color", new THREE.BufferAttribute(colors, 3));
  geometry.setIndex(mesh.triangles.flat());
  geometry.computeVertexNormals();
  return geometry;
}

export function createGamutScene(container: HTMLElement): SceneHandles {
  const scene = new THREE.Scene();
  scene.background = new THREE.Color(0x14171c);

  const width = container.clientWidth || 640;
  const height = container.clientHeight || 480;
  const camera = new THREE.PerspectiveCamera(45, width / height, 0.1, 2000);
  camera.position.set(170, 130, 170);

  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setSize(width, height);
  container.appendChild(renderer.domElement);

  const controls = new OrbitControls(camera, renderer.domElement);
  controls.target.set(0, 50, 0);
  controls.update();

  scene.add(new THREE.AmbientLight(0xffffff, 0.55));
  const keyLight = new THREE.DirectionalLight(0xffffff, 1.4);
  keyLight.position.set(150, 200, 150);
  scene.add(keyLight);

  const axis = new THREE.Line(
    new THREE.BufferGeometry().setFromPoints([
      new THREE.Vector3(0, 0, 0),
      new THREE.Vector3(0, 100, 0),
    ]),
    new THREE.LineBasicMaterial({ color: 0x8a93a1 }),
  );
  scene.add(axis);

  let imageObj: THREE.Mesh | null = null;
  let profileObj: THREE.Mesh | null = null;
  let imageMeshDto: MeshDto | null = null;
  let oogMarkers: THREE.Points | null = null;
  let selectedMarker: THREE.Mesh | null = null;
  let oogCells = new Set<number>();
  let selectedCell: number | null = null;
  let pickListener: ((cell: number) => void) | null = null;
  let profileOpacity = 0.35;

  function material(opacity: number): THREE.MeshLambertMaterial {
    return new THREE.MeshLambertMaterial({
      vertexColors: true,
      side: THREE.DoubleSide,
      transparent: opacity < 1,
      opacity,
      depthWrite: opacity >= 1,
    });
  }

  function replace(
    current: THREE.Mesh | null,
    dto: MeshDto | null,
    opacity: number,
  ): THREE.Mesh | null {
    if (current) {
      scene.remove(current);
      current.geometry.dispose();
      (current.material as THREE.Material).dispose();
    }
    if (!dto) return null;
    const mesh = new THREE.Mesh(buildGeometry(dto), material(opacity));
    scene.add(mesh);
    return mesh;
  }

  function rebuildMarkers(): void {
    if (oogMarkers) {
      scene.remove(oogMarkers);
      oogMarkers.geometry.dispose();
      (oogMarkers.material as THREE.Material).dispose();
      oogMarkers = null;
    }
    if (!imageMeshDto || oogCells.size === 0) return;
    const pts: number[] = [];
    for (const cell of oogCells) {
      const v = imageMeshDto.vertices[cell];
      if (v) pts.push(v.lab[1], v.lab[0], v.lab[2]);
    }
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute("position", new THREE.BufferAttribute(new Float32Array(pts), 3));
    oogMarkers = new THREE.Points(
      geometry,
      new THREE.PointsMaterial({ color: 0xff2e2e, size: 4, sizeAttenuation: false }),
    );
    scene.add(oogMarkers);
  }

  function rebuildSelection(): void {
    if (selectedMarker) {
      scene.remove(selectedMarker);
      selectedMarker.geometry.dispose();
      (selectedMarker.material as THREE.Material).dispose();
      selectedMarker = null;
    }
    if (selectedCell === null || !imageMeshDto) return;
    const v = imageMeshDto.vertices[selectedCell];
    if (!v) return;
    selectedMarker = new THREE.Mesh(
      new THREE.SphereGeometry(2.5, 12, 8),
      new THREE.MeshBasicMaterial({ color: 0xffd166 }),
    );
    selectedMarker.position.set(v.lab[1], v.lab[0], v.lab[2]);
    scene.add(selectedMarker);
  }

  const raycaster = new THREE.Raycaster();
  renderer.domElement.addEventListener("click", (event) => {
    if (!imageObj || !imageMeshDto || !pickListener) return;
    const rect = renderer.domElement.getBoundingClientRect();
    const ndc = new THREE.Vector2(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      -((event.clientY - rect.top) / rect.height) * 2 + 1,
    );
    raycaster.setFromCamera(ndc, camera);
    const hits = raycaster.intersectObject(imageObj);
    if (hits.length === 0 || !hits[0].face) return;
    const face = hits[0].face;
    const poleStart = imageMeshDto.vertices.length - 2;
    const cell = [face.a, face.b, face.c].find((idx) => idx < poleStart);
    if (cell !== undefined) pickListener(cell);
  });

  let disposed = false;
  function animate(): void {
    if (disposed) return;
    requestAnimationFrame(animate);
    controls.update();
    renderer.render(scene, camera);
  }
  animate();

  return {
    setImageMesh(dto) {
      imageMeshDto = dto;
      imageObj = replace(imageObj, dto, 1.0);
      rebuildMarkers();
      rebuildSelection();
    },
    setProfileMesh(dto) {
      profileObj = replace(profileObj, dto, profileOpacity);
    },
    setProfileOpacity(opacity) {
      profileOpacity = opacity;
      if (profileObj) {
        const m = profileObj.material as THREE.MeshLambertMaterial;
        m.opacity = opacity;
        m.transparent = opacity < 1;
        m.depthWrite = opacity >= 1;
        m.needsUpdate = true;
      }
    },
    setLightAngle(degrees) {
      const rad = (degrees * Math.PI) / 180;
      keyLight.position.set(250 * Math.cos(rad), 200, 250 * Math.sin(rad));
    },
    setOogCells(cells) {
      oogCells = cells;
      rebuildMarkers();
    },
    setSelectedCell(cell) {
      selectedCell = cell;
      rebuildSelection();
    },
    onCellPicked(cb) {
      pickListener = cb;
    },
    dispose() {
      disposed = true;
      renderer.dispose();
      container.removeChild(renderer.domElement);
    },
  };
}
