import net from 'node:net';
import { afterEach, describe, expect, it } from 'vitest';
import { WebSocket } from 'ws';

// The bridge is plain node, imported as-is.
import { startBridge } from '../bridge/bridge.mjs';

interface FakeBackend {
  port: number;
  received: string[];
  /** The bridge-side socket, once the bridge has dialed in. */
  socket(): Promise<net.Socket>;
  close(): void;
}

/** A TCP stand-in for the debug backend, scriptable from the test. */
function fakeBackend(): Promise<FakeBackend> {
  const received: string[] = [];
  const sockets: net.Socket[] = [];
  let announce: (socket: net.Socket) => void = () => {};
  const arrival = new Promise<net.Socket>((resolve) => {
    announce = resolve;
  });
  const server = net.createServer((socket) => {
    sockets.push(socket);
    announce(socket);
    let buffered = '';
    socket.on('data', (chunk) => {
      buffered += chunk.toString('utf-8');
      let cut;
      while ((cut = buffered.indexOf('\n')) !== -1) {
        received.push(buffered.slice(0, cut));
        buffered = buffered.slice(cut + 1);
      }
    });
  });
  return new Promise((resolve) => {
    server.listen(0, '127.0.0.1', () => {
      resolve({
        port: (server.address() as net.AddressInfo).port,
        received,
        socket: () => arrival,
        close: () => {
          for (const socket of sockets) {
            socket.destroy();
          }
          server.close();
        },
      });
    });
  });
}

function connect(port: number): Promise<WebSocket> {
  const ws = new WebSocket(`ws://127.0.0.1:${port}`);
  return new Promise((resolve, reject) => {
    ws.addEventListener('open', () => resolve(ws));
    ws.addEventListener('error', () => reject(new Error('connect failed')));
  });
}

async function until(check: () => boolean): Promise<void> {
  for (let i = 0; i < 200 && !check(); i += 1) {
    await new Promise((r) => setTimeout(r, 10));
  }
  expect(check()).toBe(true);
}

const cleanups: Array<() => void | Promise<void>> = [];
afterEach(async () => {
  while (cleanups.length > 0) {
    await cleanups.pop()!();
  }
});

async function bridgedPair(): Promise<{ backend: FakeBackend; ws: WebSocket }> {
  const backend = await fakeBackend();
  cleanups.push(() => backend.close());
  const bridge = await startBridge({ listenPort: 0, backendPort: backend.port });
  cleanups.push(() => bridge.close());
  const ws = await connect(bridge.port);
  cleanups.push(() => ws.close());
  return { backend, ws };
}

describe('startBridge', () => {
  it('forwards lines verbatim in both directions', async () => {
    const { backend, ws } = await bridgedPair();
    ws.send('{"cmd": "nextStage"}');
    await until(() => backend.received.length === 1);
    expect(backend.received).toEqual(['{"cmd": "nextStage"}']);

    const messages: string[] = [];
    ws.addEventListener('message', (event) => messages.push(String(event.data)));
    (await backend.socket()).write('{"event": "stage", "stage": 1, "source": "s"}\n');
    await until(() => messages.length === 1);
    expect(messages).toEqual(['{"event": "stage", "stage": 1, "source": "s"}']);
  });

  it('reassembles backend lines however the chunks arrive', async () => {
    const { backend, ws } = await bridgedPair();
    const messages: string[] = [];
    ws.addEventListener('message', (event) => messages.push(String(event.data)));

    const socket = await backend.socket();
    socket.write('{"event": "paus');
    await new Promise((r) => setTimeout(r, 20));
    expect(messages).toEqual([]);
    socket.write('ed", "line": 1}\n{"event": "paused", "line": 2}\n{"ev');
    socket.write('ent": "bye"}\n');
    await until(() => messages.length === 3);
    expect(messages).toEqual([
      '{"event": "paused", "line": 1}',
      '{"event": "paused", "line": 2}',
      '{"event": "bye"}',
    ]);
  });

  it('sheds a second client while one session is active', async () => {
    const { ws } = await bridgedPair();
    void ws;
    const bridgePort = new URL(ws.url).port;
    const second = new WebSocket(`ws://127.0.0.1:${bridgePort}`);
    const code = await new Promise<number>((resolve) => {
      second.addEventListener('close', (event) => resolve(event.code));
    });
    expect(code).toBe(1013);
  });

  it('closes the socket when the backend goes away', async () => {
    const { backend, ws } = await bridgedPair();
    const closed = new Promise<void>((resolve) => ws.addEventListener('close', () => resolve()));
    backend.close();
    await closed;
  });
});
